// corpus/kaldi-dir.cc

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

#include "corpus/kaldi-dir.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/elan.h"
#include "feat/wave-io.h"

namespace fieldasr {

namespace fs = std::filesystem;

std::string FormatSeconds(int64_t ms) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld.%03lld", static_cast<long long>(ms / 1000),
                static_cast<long long>(ms % 1000));
  return buf;
}

int64_t ParseSeconds(std::string_view s) { return SecondsToMs(s); }

std::vector<fs::path> WriteKaldiDir(const Corpus &corpus, const fs::path &dest) {
  std::vector<const Utterance *> utts;
  for (const Utterance &u : corpus.utterances) utts.push_back(&u);
  std::sort(utts.begin(), utts.end(),
            [](const Utterance *a, const Utterance *b) { return a->id < b->id; });
  for (size_t i = 1; i < utts.size(); ++i)
    if (utts[i]->id == utts[i - 1]->id)
      Fail(ErrorKind::kIntegrity, "duplicate utterance id ", utts[i]->id);
  std::vector<const Recording *> recs;
  for (const Recording &r : corpus.recordings) recs.push_back(&r);
  std::sort(recs.begin(), recs.end(),
            [](const Recording *a, const Recording *b) { return a->id < b->id; });
  for (size_t i = 1; i < recs.size(); ++i)
    if (recs[i]->id == recs[i - 1]->id)
      Fail(ErrorKind::kIntegrity, "duplicate recording id ", recs[i]->id);

  std::string wav_scp, segments, text, utt2spk;
  for (const Recording *r : recs) {
    std::error_code ec;
    fs::path abs = r->path.empty() ? fs::path() : fs::absolute(r->path, ec);
    wav_scp += r->id + " " + abs.string() + "\n";
  }
  for (const Utterance *u : utts) {
    if (u->text.find_first_of("\r\n") != std::string::npos)
      Fail(ErrorKind::kFormat, "transcript of ", u->id, " contains a line break");
    segments += u->id + " " + u->recording_id + " " + FormatSeconds(u->start_ms) + " " +
                FormatSeconds(u->end_ms) + "\n";
    text += u->id + " " + u->text + "\n";
    utt2spk += u->id + " " + u->speaker_id + "\n";
  }

  std::error_code ec;
  fs::create_directories(dest, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create ", dest.string(), ": ", ec.message());
  std::vector<fs::path> written;
  for (auto [name, body] : {std::pair<const char *, std::string *>{"wav.scp", &wav_scp},
                            {"segments", &segments},
                            {"text", &text},
                            {"utt2spk", &utt2spk}}) {
    WriteFileBytes(dest / name, *body);
    written.push_back(dest / name);
  }
  return written;
}

namespace {

// "<key> <rest>" where rest may contain spaces (or be empty).
std::map<std::string, std::string> ReadKeyed(const fs::path &path) {
  if (!fs::exists(path)) Fail(ErrorKind::kNotFound, "missing ", path.string());
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (const std::string &line : ReadLines(path)) {
    ++line_no;
    if (line.empty()) continue;
    size_t sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    if (!out.emplace(key, rest).second)
      Fail(ErrorKind::kIntegrity, path.filename().string(), " line ", line_no,
           ": duplicate key ", key);
  }
  return out;
}

}  // namespace

Corpus ReadKaldiDir(const fs::path &dir) {
  auto wav_scp = ReadKeyed(dir / "wav.scp");
  auto segments = ReadKeyed(dir / "segments");
  auto text = ReadKeyed(dir / "text");
  auto utt2spk = ReadKeyed(dir / "utt2spk");

  Corpus corpus;
  std::map<std::string, int64_t> last_end;
  for (const auto &[utt_id, rest] : segments) {
    std::vector<std::string> f = SplitOnSpace(rest);
    if (f.size() != 3) Fail(ErrorKind::kParse, "segments: bad line for ", utt_id);
    Utterance u;
    u.id = utt_id;
    u.recording_id = f[0];
    u.start_ms = ParseSeconds(f[1]);
    u.end_ms = ParseSeconds(f[2]);
    auto t = text.find(utt_id);
    auto s = utt2spk.find(utt_id);
    if (t == text.end() || s == utt2spk.end())
      Fail(ErrorKind::kIntegrity, "utterance ", utt_id, " missing from text or utt2spk");
    u.text = t->second;
    u.speaker_id = s->second;
    last_end[u.recording_id] = std::max(last_end[u.recording_id], u.end_ms);
    corpus.utterances.push_back(std::move(u));
  }
  if (text.size() != segments.size() || utt2spk.size() != segments.size())
    Fail(ErrorKind::kIntegrity, "segments, text and utt2spk list different utterances");

  for (const auto &[rec_id, path] : wav_scp) {
    Recording r;
    r.id = rec_id;
    r.path = path;
    std::error_code ec;
    if (!path.empty() && fs::is_regular_file(path, ec)) {
      WaveInfo info = ReadWaveInfo(path);
      r.sample_rate = info.sample_rate;
      r.duration_ms = info.duration_ms();
    } else {
      r.duration_ms = last_end.count(rec_id) ? last_end[rec_id] : 0;
    }
    corpus.recordings.push_back(std::move(r));
  }
  NormalizeCorpus(&corpus);
  return corpus;
}

std::map<std::string, std::string> ParseGenreManifest(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = TrimAscii(line);
    if (t.empty() || t[0] == '#') continue;
    size_t tab = t.find('\t');
    if (tab == std::string_view::npos)
      Fail(ErrorKind::kParse, "genre manifest line ", line_no, ": expected recording-id<TAB>genre");
    std::string rec(TrimAscii(t.substr(0, tab))), genre(TrimAscii(t.substr(tab + 1)));
    if (rec.empty() || genre.empty())
      Fail(ErrorKind::kParse, "genre manifest line ", line_no, ": empty field");
    out[rec] = genre;
  }
  return out;
}

}  // namespace fieldasr
