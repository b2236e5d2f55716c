// eval/synth.cc

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

#include "eval/synth.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <set>

#include "base/error.h"
#include "base/io-util.h"
#include "base/seeded-random.h"
#include "base/text-utils.h"
#include "corpus/xml-dom.h"
#include "feat/wave-io.h"

namespace fieldasr {

namespace {

void CheckAlphabet(const std::u32string &alphabet) {
  if (alphabet.empty()) Fail(ErrorKind::kParameter, "synthetic alphabet is empty");
  std::set<char32_t> seen;
  for (char32_t c : alphabet) {
    if (IsUnicodeWhitespace(c) || c < 0x20)
      Fail(ErrorKind::kParameter, "synthetic alphabet holds a space or control character");
    if (!seen.insert(c).second)
      Fail(ErrorKind::kParameter, "synthetic alphabet repeats '", EncodeUtf8(c), "'");
  }
}

std::string SynthId(const char *prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%05d", prefix, i);
  return buf;
}

}  // namespace

void SynthSpec::Validate() const {
  CheckAlphabet(alphabet);
  if (template_frames_per_char < 1 || feature_dim < 1 || num_utterances < 1)
    Fail(ErrorKind::kParameter, "synthetic sizes must be positive");
  if (!(noise_sigma >= 0.0)) Fail(ErrorKind::kParameter, "noise sigma must be >= 0");
  if (min_chars < 1 || max_chars < min_chars)
    Fail(ErrorKind::kParameter, "bad utterance length range [", min_chars, ", ", max_chars, "]");
}

std::u32string RandomSynthText(std::mt19937_64 &rng, const std::u32string &alphabet,
                               int min_chars, int max_chars) {
  int n = min_chars + static_cast<int>(UniformIndex(rng, max_chars - min_chars + 1));
  std::u32string text;
  for (int k = 0; k < n; ++k) text += alphabet[UniformIndex(rng, alphabet.size())];
  return text;
}

SynthCorpus MakeSynthCorpus(const SynthSpec &spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  SynthCorpus out;
  for (size_t c = 0; c < spec.alphabet.size(); ++c) {
    std::vector<double> t(spec.feature_dim);
    for (double &v : t) v = StandardNormal(rng);
    out.templates.push_back(std::move(t));
  }
  // Separate stream for noise so texts do not depend on sigma.
  std::mt19937_64 noise(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  const size_t F = spec.feature_dim, R = spec.template_frames_per_char;
  for (int u = 0; u < spec.num_utterances; ++u) {
    std::u32string text = RandomSynthText(rng, spec.alphabet, spec.min_chars, spec.max_chars);
    nn::Tensor frames = nn::Tensor::Zeros(text.size() * R, F);
    for (size_t i = 0; i < text.size(); ++i) {
      const std::vector<double> &t = out.templates[spec.alphabet.find(text[i])];
      for (size_t r = 0; r < R; ++r)
        for (size_t d = 0; d < F; ++d) {
          double v = t[d];
          if (spec.noise_sigma > 0.0) v += spec.noise_sigma * StandardNormal(noise);
          frames(i * R + r, d) = v;
        }
    }
    Recording rec;
    rec.id = SynthId("synth", u);
    rec.path = "synthetic";
    rec.duration_ms = static_cast<int64_t>(frames.rows()) * kSynthFrameMs;
    Utterance utt;
    utt.recording_id = rec.id;
    utt.speaker_id = "synth";
    utt.start_ms = 0;
    utt.end_ms = rec.duration_ms;
    utt.id = MakeUtteranceId(utt.speaker_id, rec.id, 0);
    utt.text = EncodeUtf8(text);
    out.features.push_back({utt.id, std::move(frames)});
    out.corpus.recordings.push_back(std::move(rec));
    out.corpus.utterances.push_back(std::move(utt));
  }
  // Ids are zero-padded, so generation order is already sorted.
  NormalizeCorpus(&out.corpus);
  return out;
}

void SynthAudioSpec::Validate() const {
  CheckAlphabet(alphabet);
  if (alphabet.size() > 32) Fail(ErrorKind::kParameter, "audio synth supports up to 32 characters");
  if (char_ms < 30 || pad_ms < 0 || num_utterances < 1 || sample_rate < 8000)
    Fail(ErrorKind::kParameter, "bad synthetic audio sizes");
  if (min_chars < 1 || max_chars < min_chars)
    Fail(ErrorKind::kParameter, "bad utterance length range [", min_chars, ", ", max_chars, "]");
  if (!(noise_amplitude >= 0.0)) Fail(ErrorKind::kParameter, "noise amplitude must be >= 0");
}

SynthClip MakeSynthClip(const SynthAudioSpec &spec, const std::u32string &text,
                        uint64_t noise_seed) {
  // 32 log-spaced tones between 250 Hz and 0.4 * rate; character i sounds
  // tones i, i+11 and i+21 (mod 32). Those sets differ for every i < 32.
  const double lo = 250.0, hi = 0.4 * spec.sample_rate;
  auto tone = [&](int k) { return lo * std::pow(hi / lo, (k % 32) / 31.0); };
  const size_t per_char = static_cast<size_t>(spec.char_ms) * spec.sample_rate / 1000;
  const size_t pad = static_cast<size_t>(spec.pad_ms) * spec.sample_rate / 1000;
  SynthClip clip;
  clip.text = EncodeUtf8(text);
  clip.samples.assign(2 * pad + per_char * text.size(), 0.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (size_t i = 0; i < text.size(); ++i) {
    size_t idx = spec.alphabet.find(text[i]);
    if (idx == std::u32string::npos)
      Fail(ErrorKind::kParameter, "character '", EncodeUtf8(text[i]), "' not in the alphabet");
    int c = static_cast<int>(idx);
    for (size_t n = 0; n < per_char; ++n) {
      double t = static_cast<double>(n) / spec.sample_rate;
      double v = 0.0;
      for (int k : {c, c + 11, c + 21}) v += std::sin(two_pi * tone(k) * t);
      clip.samples[pad + i * per_char + n] = 0.25 * v;
    }
  }
  std::mt19937_64 rng(noise_seed);
  if (spec.noise_amplitude > 0.0)
    for (double &s : clip.samples) s += spec.noise_amplitude * StandardNormal(rng);
  return clip;
}

std::vector<std::string> WriteSynthAudioCorpus(const SynthAudioSpec &spec,
                                               const std::string &dir) {
  spec.Validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorKind::kIo, "cannot create ", dir, ": ", ec.message());
  std::mt19937_64 rng(spec.seed);
  std::vector<std::string> stems;
  for (int u = 0; u < spec.num_utterances; ++u) {
    std::u32string text = RandomSynthText(rng, spec.alphabet, spec.min_chars, spec.max_chars);
    std::string stem = SynthId("clip", u);
    SynthClip clip = MakeSynthClip(spec, text, spec.seed + 1 + static_cast<uint64_t>(u));
    std::filesystem::path base = std::filesystem::path(dir) / stem;
    WriteWavFile(base.string() + ".wav", clip.samples, spec.sample_rate);
    int64_t start = spec.pad_ms;
    int64_t end = spec.pad_ms + static_cast<int64_t>(spec.char_ms) * text.size();
    std::string eaf =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<ANNOTATION_DOCUMENT FORMAT=\"3.0\" VERSION=\"3.0\">\n"
        "  <HEADER MEDIA_FILE=\"\" TIME_UNITS=\"milliseconds\">\n"
        "    <MEDIA_DESCRIPTOR MEDIA_URL=\"file:///" + stem + ".wav\" MIME_TYPE=\"audio/x-wav\"/>\n"
        "  </HEADER>\n"
        "  <TIME_ORDER>\n"
        "    <TIME_SLOT TIME_SLOT_ID=\"ts1\" TIME_VALUE=\"" + std::to_string(start) + "\"/>\n"
        "    <TIME_SLOT TIME_SLOT_ID=\"ts2\" TIME_VALUE=\"" + std::to_string(end) + "\"/>\n"
        "  </TIME_ORDER>\n"
        "  <TIER LINGUISTIC_TYPE_REF=\"default-lt\" PARTICIPANT=\"synth\" TIER_ID=\"T1\">\n"
        "    <ANNOTATION>\n"
        "      <ALIGNABLE_ANNOTATION ANNOTATION_ID=\"a1\" TIME_SLOT_REF1=\"ts1\" "
        "TIME_SLOT_REF2=\"ts2\">\n"
        "        <ANNOTATION_VALUE>" + XmlEscape(clip.text) + "</ANNOTATION_VALUE>\n"
        "      </ALIGNABLE_ANNOTATION>\n"
        "    </ANNOTATION>\n"
        "  </TIER>\n"
        "  <LINGUISTIC_TYPE LINGUISTIC_TYPE_ID=\"default-lt\" TIME_ALIGNABLE=\"true\"/>\n"
        "</ANNOTATION_DOCUMENT>\n";
    WriteFileBytes(base.string() + ".eaf", eaf);
    stems.push_back(stem);
  }
  return stems;
}

}  // namespace fieldasr
