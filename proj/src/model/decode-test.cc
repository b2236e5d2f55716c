// model/decode-test.cc

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

#include <algorithm>
#include <cmath>
#include <random>

#include "base/error.h"
#include "ctc-oracle.h"
#include "model/decode.h"
#include "model/hybrid-model.h"

namespace fieldasr {

static nn::Tensor RandomFeatures(size_t T, size_t F, std::mt19937_64 &rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  nn::Tensor t = nn::Tensor::Zeros(T, F);
  for (size_t i = 0; i < t.size(); ++i) t[i] = n(rng);
  return t;
}

// A small random model with weights wide enough that outputs are peaky.
static HybridModel RandomModel(uint64_t seed, std::u32string chars = U"ab", double spread = 1.0) {
  ModelConfig c;
  c.input_dim = 3;
  c.encoder_layers = 1;
  c.hidden_size = 4;
  c.decoder_hidden = 4;
  c.attention_dim = 4;
  HybridModel m(c, CharInventory(std::move(chars)));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-spread, spread);
  for (nn::Parameter *p : m.Parameters())
    for (size_t i = 0; i < p->value.size(); ++i) p->value[i] = u(rng);
  return m;
}

TEST_CASE("beam 1 with attention only is greedy attention") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    HybridModel m = RandomModel(100 + trial);
    nn::Tensor f = RandomFeatures(3 + trial % 5, 3, rng);
    Hypothesis g = GreedyAttentionDecode(m, f);
    DecodeOptions o;
    o.beam = 1;
    o.ctc_weight = 0.0;
    Hypothesis b = DecodeJoint(m, f, o);
    CHECK(b.ids == g.ids);
    CHECK(b.text == g.text);
    CHECK(b.score == doctest::Approx(g.score).epsilon(1e-12));
  }
}

TEST_CASE("ctc only with an exhaustive beam finds the best labeling") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    HybridModel m = RandomModel(200 + trial, U"ab", 2.0);
    const size_t T = 1 + trial % 4;
    nn::Tensor f = RandomFeatures(T, 3, rng);
    nn::Tape tape(false);
    nn::Tensor lp = m.Encode(tape, f).ctc_log_probs.value();
    // eos is never emitted as a character, so labelings holding it are out.
    std::vector<int> best;
    double best_mass = -1.0;
    for (const auto &[lab, mass] : oracle::LabelingMass(lp)) {
      if (std::count(lab.begin(), lab.end(), CharInventory::kEos) > 0) continue;
      if (mass > best_mass) {
        best_mass = mass;
        best = lab;
      }
    }
    DecodeOptions o;
    o.beam = static_cast<int>(std::pow(5.0, static_cast<double>(T)));
    o.ctc_weight = 1.0;
    Hypothesis h = DecodeJoint(m, f, o);
    CAPTURE(trial);
    CHECK(h.ids == LabelSequence(best.begin(), best.end()));
    CHECK(h.score == doctest::Approx(std::log(best_mass)).epsilon(1e-9));
  }
}

TEST_CASE("wider beams do not lower the best score on random small models") {
  std::mt19937_64 rng(3);
  int compared = 0, violations = 0;
  for (int trial = 0; trial < 60; ++trial) {
    HybridModel m = RandomModel(300 + trial, U"abc", 1.5);
    nn::Tensor f = RandomFeatures(2 + trial % 5, 3, rng);
    for (double lambda : {0.0, 0.5, 1.0}) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int beam = 1; beam <= 8; ++beam) {
        DecodeOptions o;
        o.beam = beam;
        o.ctc_weight = lambda;
        double s = DecodeJoint(m, f, o).score;
        ++compared;
        if (s < prev - 1e-12) {
          ++violations;
          MESSAGE("trial " << trial << " lambda " << lambda << " beam " << beam << ": " << s
                           << " < " << prev);
        }
        prev = std::max(prev, s);
      }
    }
  }
  MESSAGE(compared << " beam comparisons, " << violations << " decreases");
  CHECK(violations == 0);
}

TEST_CASE("decoding is deterministic and validates options") {
  std::mt19937_64 rng(4);
  HybridModel m = RandomModel(400, U"abcd");
  nn::Tensor f = RandomFeatures(7, 3, rng);
  Hypothesis a = DecodeJoint(m, f);
  Hypothesis b = DecodeJoint(m, f);
  CHECK(a.ids == b.ids);
  CHECK(a.score == b.score);
  CHECK(static_cast<int>(a.ids.size()) <= 7);
  DecodeOptions o;
  o.beam = 0;
  try {
    DecodeJoint(m, f, o);
    FAIL("expected parameter error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kParameter);
  }
  o.beam = 2;
  o.ctc_weight = -0.1;
  CHECK_THROWS_AS(DecodeJoint(m, f, o), Error);
  o.ctc_weight = 0.0;
  o.max_len = 2;
  CHECK(DecodeJoint(m, f, o).ids.size() <= 2);
  CHECK(GreedyAttentionDecode(m, f, 1).ids.size() <= 1);
}

TEST_CASE("greedy ctc decode collapses the framewise argmax") {
  std::mt19937_64 rng(5);
  HybridModel m = RandomModel(500, U"ab", 2.0);
  nn::Tensor f = RandomFeatures(8, 3, rng);
  nn::Tape tape(false);
  nn::Tensor lp = m.Encode(tape, f).ctc_log_probs.value();
  std::vector<int> path;
  for (size_t t = 0; t < lp.rows(); ++t) {
    int k = 0;
    for (size_t v = 1; v < lp.cols(); ++v)
      if (lp(t, v) > lp(t, k)) k = static_cast<int>(v);
    path.push_back(k);
  }
  std::vector<int> expect = oracle::CollapsePath(path);
  CHECK(GreedyCtcDecode(m, f).ids == LabelSequence(expect.begin(), expect.end()));
}

}  // namespace fieldasr
