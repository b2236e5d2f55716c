// eval/synth-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/elan.h"
#include "eval/synth.h"
#include "feat/wave-io.h"

namespace fieldasr {

TEST_CASE("zero noise gives the concatenated templates") {
  SynthSpec s;
  s.noise_sigma = 0.0;
  s.num_utterances = 6;
  s.feature_dim = 7;
  SynthCorpus c = MakeSynthCorpus(s);
  REQUIRE(c.features.size() == 6);
  for (size_t u = 0; u < 6; ++u) {
    const Utterance &utt = c.corpus.utterances[u];
    CHECK(c.features[u].utterance_id == utt.id);
    std::u32string text = DecodeUtf8(utt.text);
    CHECK(text.size() >= 3);
    CHECK(text.size() <= 8);
    const nn::Tensor &f = c.features[u].frames;
    REQUIRE(f.rows() == 5 * text.size());
    CHECK(utt.duration_ms() == static_cast<int64_t>(f.rows()) * 10);
    for (size_t t = 0; t < f.rows(); ++t) {
      const auto &tmpl = c.templates[s.alphabet.find(text[t / 5])];
      for (size_t d = 0; d < 7; ++d) CHECK(f(t, d) == tmpl[d]);
    }
  }
}

TEST_CASE("same seed, same corpus; noise has the requested spread") {
  SynthSpec s;
  s.seed = 3;
  s.noise_sigma = 0.5;
  SynthCorpus a = MakeSynthCorpus(s), b = MakeSynthCorpus(s);
  CHECK(a.corpus == b.corpus);
  for (size_t i = 0; i < a.features.size(); ++i)
    CHECK(a.features[i].frames.vector() == b.features[i].frames.vector());
  s.noise_sigma = 0.0;
  SynthCorpus clean = MakeSynthCorpus(s);
  CHECK(clean.corpus == a.corpus);  // texts do not depend on sigma
  double sum = 0.0, sq = 0.0;
  size_t n = 0;
  for (size_t i = 0; i < a.features.size(); ++i)
    for (size_t k = 0; k < a.features[i].frames.size(); ++k) {
      double e = a.features[i].frames[k] - clean.features[i].frames[k];
      sum += e;
      sq += e * e;
      ++n;
    }
  double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
  CHECK(sd == doctest::Approx(0.5).epsilon(0.05));
  s.seed = 4;
  CHECK(!(MakeSynthCorpus(s).corpus == a.corpus));
}

TEST_CASE("templates are pairwise distinct for seed 42") {
  SynthSpec s;
  s.seed = 42;
  s.alphabet = U"abcdefghij";
  SynthCorpus c = MakeSynthCorpus(s);
  for (size_t i = 0; i < c.templates.size(); ++i)
    for (size_t j = i + 1; j < c.templates.size(); ++j) {
      double d = 0.0;
      for (size_t k = 0; k < c.templates[i].size(); ++k)
        d += std::pow(c.templates[i][k] - c.templates[j][k], 2);
      CHECK(d > 0.0);
    }
}

TEST_CASE("synth settings validation") {
  SynthSpec s;
  s.alphabet.clear();
  try {
    MakeSynthCorpus(s);
    FAIL("expected parameter error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kParameter);
  }
  s = SynthSpec();
  s.alphabet = U"aa";
  CHECK_THROWS_AS(MakeSynthCorpus(s), Error);
  s = SynthSpec();
  s.alphabet = U"a b";
  CHECK_THROWS_AS(MakeSynthCorpus(s), Error);
  s = SynthSpec();
  s.noise_sigma = -1;
  CHECK_THROWS_AS(MakeSynthCorpus(s), Error);
  s = SynthSpec();
  s.min_chars = 4;
  s.max_chars = 2;
  CHECK_THROWS_AS(MakeSynthCorpus(s), Error);
}

TEST_CASE("audio corpus writes wav and eaf pairs") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "fieldasr-synth-test";
  fs::remove_all(dir);
  SynthAudioSpec s;
  s.num_utterances = 3;
  s.seed = 5;
  std::vector<std::string> stems = WriteSynthAudioCorpus(s, dir.string());
  REQUIRE(stems.size() == 3);
  for (const std::string &stem : stems) {
    std::vector<Utterance> u = ParseElan(ReadFileBytes(dir / (stem + ".eaf")), stem, "T1");
    REQUIRE(u.size() == 1);
    std::u32string text = DecodeUtf8(u[0].text);
    CHECK(u[0].start_ms == 100);
    CHECK(u[0].end_ms == 100 + 120 * static_cast<int64_t>(text.size()));
    WaveInfo info = ReadWaveInfo(dir / (stem + ".wav"));
    CHECK(info.sample_rate == 16000);
    CHECK(info.duration_ms() == u[0].end_ms + 100);
  }
  SynthClip a = MakeSynthClip(s, U"ab", 1), b = MakeSynthClip(s, U"ab", 1);
  CHECK(a.samples == b.samples);
  CHECK(a.samples.size() == 7040);  // 2 x 100 ms pad + 2 x 120 ms
  CHECK_THROWS_AS(MakeSynthClip(s, U"az", 1), Error);
  fs::remove_all(dir);
}

}  // namespace fieldasr
