// corpus/elan.cc

// Copyright 2026  The fieldasr Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "corpus/elan.h"

#include <map>
#include <sstream>

#include "base/error.h"
#include "base/text-utils.h"
#include "corpus/xml-dom.h"

namespace fieldasr {

namespace {

std::unique_ptr<XmlElement> ParseElanRoot(std::string_view doc) {
  std::unique_ptr<XmlElement> root = ParseXml(doc);
  if (root->name != "ANNOTATION_DOCUMENT")
    Fail(ErrorKind::kStructure, "expected ANNOTATION_DOCUMENT root, found ", root->name);
  return root;
}

int64_t ParseMs(const std::string &value, const std::string &slot) {
  try {
    size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used == value.size() && v >= 0) return v;
  } catch (const std::exception &) {
  }
  Fail(ErrorKind::kStructure, "time slot ", slot, " has bad TIME_VALUE '", value, "'");
}

std::string AttrOr(const XmlElement &e, std::string_view key, std::string fallback) {
  const std::string *v = e.Attr(key);
  return v ? *v : fallback;
}

}  // namespace

std::vector<std::string> ElanTierIds(std::string_view doc) {
  std::unique_ptr<XmlElement> root = ParseElanRoot(doc);
  std::vector<std::string> ids;
  for (const XmlElement *tier : root->Children("TIER")) ids.push_back(AttrOr(*tier, "TIER_ID", ""));
  return ids;
}

std::vector<Utterance> ParseElan(std::string_view doc, std::string_view recording_id,
                                 const std::optional<std::string> &tier_id) {
  std::unique_ptr<XmlElement> root = ParseElanRoot(doc);

  // Slots without TIME_VALUE are legal ELAN but unusable here; they map to
  // nothing, so annotations pointing at them fail like dangling ones.
  std::map<std::string, int64_t> slots;
  if (const XmlElement *order = root->Child("TIME_ORDER")) {
    for (const XmlElement *slot : order->Children("TIME_SLOT")) {
      std::string id = AttrOr(*slot, "TIME_SLOT_ID", "");
      if (const std::string *v = slot->Attr("TIME_VALUE")) slots[id] = ParseMs(*v, id);
    }
  }

  auto has_alignable = [](const XmlElement *tier) {
    for (const XmlElement *a : tier->Children("ANNOTATION"))
      if (a->Child("ALIGNABLE_ANNOTATION")) return true;
    return false;
  };
  std::vector<const XmlElement *> tiers = root->Children("TIER");
  const XmlElement *chosen = nullptr;
  if (tier_id) {
    for (const XmlElement *t : tiers)
      if (AttrOr(*t, "TIER_ID", "") == *tier_id) {
        chosen = t;
        break;
      }
    if (chosen == nullptr) {
      std::ostringstream names;
      for (size_t i = 0; i < tiers.size(); ++i)
        names << (i ? ", " : "") << AttrOr(*tiers[i], "TIER_ID", "?");
      Fail(ErrorKind::kNotFound, "tier '", *tier_id, "' not found; available tiers: [",
           names.str(), "]");
    }
  } else {
    for (const XmlElement *t : tiers)
      if (has_alignable(t)) {
        chosen = t;
        break;
      }
    if (chosen == nullptr) return {};
  }

  std::string participant = AttrOr(*chosen, "PARTICIPANT", "");
  std::string speaker = participant.empty() ? kUnknownSpeaker : SanitizeId(participant);

  std::vector<Utterance> out;
  for (const XmlElement *a : chosen->Children("ANNOTATION")) {
    const XmlElement *al = a->Child("ALIGNABLE_ANNOTATION");
    if (al == nullptr) continue;
    std::string ann_id = AttrOr(*al, "ANNOTATION_ID", "?");
    auto resolve = [&](const char *ref_attr) {
      std::string ref = AttrOr(*al, ref_attr, "");
      auto it = slots.find(ref);
      if (it == slots.end())
        Fail(ErrorKind::kStructure, "annotation ", ann_id, " refers to unresolved time slot '",
             ref, "'");
      return it->second;
    };
    Utterance u;
    u.recording_id = std::string(recording_id);
    u.speaker_id = speaker;
    u.start_ms = resolve("TIME_SLOT_REF1");
    u.end_ms = resolve("TIME_SLOT_REF2");
    if (u.end_ms <= u.start_ms)
      Fail(ErrorKind::kRange, "annotation ", ann_id, " ends (", u.end_ms,
           " ms) before it starts (", u.start_ms, " ms)");
    const XmlElement *value = al->Child("ANNOTATION_VALUE");
    u.text = NormalizeNfc(value ? value->text : "");
    u.id = MakeUtteranceId(u.speaker_id, u.recording_id, u.start_ms);
    out.push_back(std::move(u));
  }
  return out;
}

int64_t SecondsToMs(std::string_view s) {
  size_t dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view() : s.substr(dot + 1);
  auto all_digits = [](std::string_view d) {
    for (char c : d)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac) ||
      whole.size() > 12)
    Fail(ErrorKind::kParse, "bad time value '", s, "' (expected decimal seconds)");
  int64_t ms = 0;
  for (char c : whole) ms = ms * 10 + (c - '0');
  ms *= 1000;
  int64_t scale = 100;
  for (size_t i = 0; i < frac.size() && i < 3; ++i, scale /= 10) ms += (frac[i] - '0') * scale;
  if (frac.size() > 3 && frac[3] >= '5') ms += 1;
  return ms;
}

std::string PanglossToElan(std::string_view doc) {
  std::unique_ptr<XmlElement> root = ParseXml(doc);
  if (root->name != "TEXT")
    Fail(ErrorKind::kStructure, "expected Pangloss TEXT root, found ", root->name);

  struct Segment {
    int64_t start, end;
    std::string text;
  };
  std::vector<Segment> segments;
  for (const XmlElement *s : root->Children("S")) {
    std::string sid = AttrOr(*s, "id", "line " + std::to_string(s->line));
    const XmlElement *audio = s->Child("AUDIO");
    const XmlElement *form = s->Child("FORM");
    if (audio == nullptr || form == nullptr)
      Fail(ErrorKind::kStructure, "S element ", sid, " lacks ", audio ? "FORM" : "AUDIO");
    const std::string *start = audio->Attr("start");
    const std::string *end = audio->Attr("end");
    if (start == nullptr || end == nullptr)
      Fail(ErrorKind::kStructure, "S element ", sid, " has AUDIO without start/end");
    Segment seg;
    try {
      seg.start = SecondsToMs(*start);
      seg.end = SecondsToMs(*end);
    } catch (const Error &e) {
      Fail(ErrorKind::kStructure, "S element ", sid, ": ", e.what());
    }
    if (seg.end <= seg.start)
      Fail(ErrorKind::kRange, "S element ", sid, " ends at ", *end, " s, not after start ",
           *start, " s");
    seg.text = form->text;
    segments.push_back(std::move(seg));
  }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<ANNOTATION_DOCUMENT AUTHOR=\"\" DATE=\"1970-01-01T00:00:00Z\" FORMAT=\"3.0\" "
        "VERSION=\"3.0\">\n"
     << "  <HEADER MEDIA_FILE=\"\" TIME_UNITS=\"milliseconds\"/>\n"
     << "  <TIME_ORDER>\n";
  for (size_t i = 0; i < segments.size(); ++i) {
    os << "    <TIME_SLOT TIME_SLOT_ID=\"ts" << 2 * i + 1 << "\" TIME_VALUE=\""
       << segments[i].start << "\"/>\n";
    os << "    <TIME_SLOT TIME_SLOT_ID=\"ts" << 2 * i + 2 << "\" TIME_VALUE=\""
       << segments[i].end << "\"/>\n";
  }
  os << "  </TIME_ORDER>\n"
     << "  <TIER LINGUISTIC_TYPE_REF=\"default-lt\" TIER_ID=\"T1\">\n";
  for (size_t i = 0; i < segments.size(); ++i) {
    os << "    <ANNOTATION>\n"
       << "      <ALIGNABLE_ANNOTATION ANNOTATION_ID=\"a" << i + 1 << "\" TIME_SLOT_REF1=\"ts"
       << 2 * i + 1 << "\" TIME_SLOT_REF2=\"ts" << 2 * i + 2 << "\">\n"
       << "        <ANNOTATION_VALUE>" << XmlEscape(segments[i].text)
       << "</ANNOTATION_VALUE>\n"
       << "      </ALIGNABLE_ANNOTATION>\n"
       << "    </ANNOTATION>\n";
  }
  os << "  </TIER>\n"
     << "  <LINGUISTIC_TYPE GRAPHIC_REFERENCES=\"false\" LINGUISTIC_TYPE_ID=\"default-lt\" "
        "TIME_ALIGNABLE=\"true\"/>\n"
     << "</ANNOTATION_DOCUMENT>\n";
  return os.str();
}

}  // namespace fieldasr
