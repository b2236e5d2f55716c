// eval/learning-curve-test.cc

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
#include <random>
#include <set>

#include "base/error.h"
#include "corpus/corpus-ops.h"
#include "eval/learning-curve.h"
#include "eval/synth.h"

namespace fieldasr {

static CurveSettings TinySettings() {
  CurveSettings s;
  s.model.input_dim = 6;
  s.model.encoder_layers = 1;
  s.model.hidden_size = 6;
  s.model.decoder_hidden = 6;
  s.model.attention_dim = 6;
  s.train.epochs = 2;
  s.train.batch_utterances = 4;
  s.decode.beam = 2;
  return s;
}

static SynthCorpus TinyCorpus(int n) {
  SynthSpec spec;
  spec.feature_dim = 6;
  spec.num_utterances = n;
  spec.alphabet = U"abc";
  spec.seed = 11;
  return MakeSynthCorpus(spec);
}

TEST_CASE("one point per requested size, subsets nested") {
  SynthCorpus sc = TinyCorpus(16);
  auto [train, dev] = SplitCorpus(sc.corpus, 0.25, 1);
  double total = train.TotalDurationMs() / 60000.0;
  std::vector<Corpus> subsets;
  std::vector<std::string> log;
  auto points = LearningCurve(train, dev, sc.features, {total * 0.3, total}, TinySettings(),
                              [&](const std::string &l) { log.push_back(l); }, &subsets);
  REQUIRE(points.size() == 2);
  REQUIRE(subsets.size() == 2);
  std::set<std::string> small;
  for (const Utterance &u : subsets[0].utterances) small.insert(u.id);
  std::set<std::string> big;
  for (const Utterance &u : subsets[1].utterances) big.insert(u.id);
  for (const std::string &id : small) CHECK(big.count(id) == 1);
  CHECK(small.size() < big.size());
  for (const CurvePoint &p : points) {
    CHECK(p.epochs_used == 2);
    CHECK(p.cer_percent >= 0.0);
    CHECK(std::isfinite(p.cer_percent));
  }
  CHECK(points[0].train_minutes >= total * 0.3 - 1e-9);
  CHECK(points[1].train_minutes == doctest::Approx(total));
  CHECK(log.front().rfind("curve point 1: ", 0) == 0);

  auto single = LearningCurve(train, dev, sc.features, {total}, TinySettings());
  REQUIRE(single.size() == 1);
  // Same seed for every fresh model: the full point is reproduced exactly.
  CHECK(single[0] == points[1]);
}

TEST_CASE("curve errors") {
  SynthCorpus sc = TinyCorpus(6);
  auto [train, dev] = SplitCorpus(sc.corpus, 0.3, 1);
  CHECK_THROWS_AS(LearningCurve(train, dev, sc.features, {}, TinySettings()), Error);
  CHECK_THROWS_AS(LearningCurve(train, dev, sc.features, {1000.0}, TinySettings()), Error);
  std::vector<FeatureMatrix> partial(sc.features.begin(), sc.features.begin() + 1);
  try {
    ExamplesFor(train, partial, CharInventory(U"abc"));
    FAIL("expected not found");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kNotFound);
  }
}

TEST_CASE("profile passthrough and csv round trips") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::vector<EpochMetrics> history;
  for (int e = 1; e <= 20; ++e) history.push_back({e, u(rng), u(rng), u(rng)});
  std::vector<ProfileRow> rows = TrainingProfile(history);
  REQUIRE(rows.size() == 20);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].epoch == history[i].epoch);
    CHECK(rows[i].train_cer == history[i].train_cer);
    CHECK(rows[i].dev_cer == history[i].dev_cer);
  }
  std::string csv = ProfileToCsv(rows);
  CHECK(csv.rfind("epoch,train_cer,dev_cer\n1,", 0) == 0);
  CHECK(ProfileFromCsv(csv) == rows);

  std::vector<CurvePoint> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({u(rng) * 100, u(rng) * 30, 20});
  pts.push_back({1.0 / 3.0, 0.1 + 0.2, 1});
  std::string ccsv = CurveToCsv(pts);
  CHECK(ccsv.rfind("train_minutes,cer_percent,epochs_used\n", 0) == 0);
  CHECK(CurveFromCsv(ccsv) == pts);

  CHECK_THROWS_AS(TrainingProfile({}), Error);
  CHECK_THROWS_AS(ProfileFromCsv("epoch,train,dev\n"), Error);
  CHECK_THROWS_AS(ProfileFromCsv("epoch,train_cer,dev_cer\n1,2\n"), Error);
  CHECK_THROWS_AS(CurveFromCsv("train_minutes,cer_percent,epochs_used\n1,x,3\n"), Error);
  CHECK_THROWS_AS(CurveFromCsv(""), Error);
}

}  // namespace fieldasr
