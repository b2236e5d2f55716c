// ctc/ctc-test.cc

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

#include "base/error.h"
#include "ctc-oracle.h"
#include "ctc/ctc.h"
#include "nn/ops.h"

namespace fieldasr {

using nn::Shape;
using nn::Tensor;

static Tensor RandomLogProbs(size_t T, size_t V, std::mt19937_64 &rng, double spread = 2.0) {
  std::normal_distribution<double> n(0.0, spread);
  Tensor t(Shape{T, V});
  for (size_t i = 0; i < t.size(); ++i) t[i] = n(rng);
  nn::LogSoftmaxRowsInPlace(&t);
  return t;
}

static std::vector<int> RandomTarget(size_t max_len, int V, std::mt19937_64 &rng) {
  std::uniform_int_distribution<size_t> len(0, max_len);
  std::uniform_int_distribution<int> lab(1, V - 1);
  std::vector<int> t(len(rng));
  for (int &x : t) x = lab(rng);
  return t;
}

static Tensor Uniform(size_t T, size_t V) { return Tensor(Shape{T, V}, -std::log(double(V))); }

TEST_CASE("collapse examples") {
  const int a = 3, b = 4;
  CHECK(Collapse(std::vector<int>{0, 0}).empty());
  CHECK(Collapse(std::vector<int>{a, 0, a}) == LabelSequence{a, a});
  CHECK(Collapse(std::vector<int>{a, a, b, 0, b}) == LabelSequence{a, b, b});
}

TEST_CASE("collapse is invariant under duplicating a path element") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> path(1 + trial % 9);
    for (int &x : path) x = lab(rng);
    std::vector<int> dup = path;
    size_t at = std::uniform_int_distribution<size_t>(0, path.size() - 1)(rng);
    dup.insert(dup.begin() + at, path[at]);
    CHECK(Collapse(dup) == Collapse(path));
  }
}

TEST_CASE("uniform two-frame lattice: p(a) = 0.75") {
  CtcResult r = CtcLoss(Uniform(2, 2), std::vector<int>{1});
  CHECK(r.loss == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
  CHECK(r.loss == doctest::Approx(0.287682).epsilon(1e-6));
}

TEST_CASE("repeated label needs a separating blank") {
  try {
    CtcLoss(Uniform(2, 2), std::vector<int>{1, 1});
    FAIL("expected infeasible target");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
    std::string msg = e.what();
    CHECK(msg.find('3') != std::string::npos);
    CHECK(msg.find('2') != std::string::npos);
  }
  CHECK(RequiredFrames(std::vector<int>{1, 1}) == 3);
  CHECK_NOTHROW(CtcLoss(Uniform(3, 2), std::vector<int>{1, 1}));
  CHECK_THROWS_AS(CtcLoss(Uniform(3, 2), std::vector<int>{0}), Error);
  CHECK_THROWS_AS(CtcLoss(Uniform(3, 2), std::vector<int>{2}), Error);
}

TEST_CASE("loss and gradient equal brute-force enumeration on random small lattices") {
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    size_t T = 1 + trial % 6;
    int V = 2 + trial % 2;
    Tensor lp = RandomLogProbs(T, V, rng);
    std::vector<int> target = RandomTarget(3, V, rng);
    if (RequiredFrames(target) > T) continue;
    CtcResult r = CtcLoss(lp, target);
    double p = oracle::TargetProbability(lp, target);
    CHECK(std::abs(std::exp(-r.loss) - p) <= 1e-9 * p);
    Tensor g = oracle::TargetGradient(lp, target);
    for (size_t i = 0; i < g.size(); ++i) CHECK(r.grad[i] == doctest::Approx(g[i]).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(13);
  Tensor lp = RandomLogProbs(5, 4, rng);
  std::vector<int> target = {2, 3, 3};
  CtcResult r = CtcLoss(lp, target);
  const double h = 1e-5;
  for (size_t i = 0; i < lp.size(); ++i) {
    Tensor up = lp, down = lp;
    up[i] += h;
    down[i] -= h;
    double numeric = (CtcLoss(up, target).loss - CtcLoss(down, target).loss) / (2 * h);
    double denom = std::max({std::abs(numeric), std::abs(r.grad[i]), 1e-6});
    CHECK(std::abs(numeric - r.grad[i]) / denom < 1e-6);
  }
}

TEST_CASE("probabilities of all feasible targets sum to one") {
  std::mt19937_64 rng(14);
  for (size_t T = 1; T <= 4; ++T) {
    for (int V = 2; V <= 3; ++V) {
      Tensor lp = RandomLogProbs(T, V, rng);
      double total = 0.0;
      for (const auto &[labeling, mass] : oracle::LabelingMass(lp)) {
        (void)mass;
        total += std::exp(-CtcLoss(lp, labeling).loss);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("long inputs do not underflow") {
  std::mt19937_64 rng(15);
  Tensor lp = RandomLogProbs(2000, 6, rng, 3.0);
  std::vector<int> target;
  std::uniform_int_distribution<int> lab(1, 5);
  for (int i = 0; i < 400; ++i) target.push_back(lab(rng));
  CtcResult r = CtcLoss(lp, target);
  CHECK(std::isfinite(r.loss));
  CHECK(r.loss > 0);
  CHECK(r.grad.AllFinite());
}

TEST_CASE("greedy decoding") {
  // Frames whose argmax reads [blank, a, a, blank, b].
  const int a = 3, b = 4;
  std::vector<int> argmax = {0, a, a, 0, b};
  Tensor lp(Shape{5, 5}, std::log(0.1));
  for (size_t t = 0; t < 5; ++t) lp(t, argmax[t]) = std::log(0.6);
  CHECK(GreedyDecode(lp) == LabelSequence{a, b});
  Tensor blanks(Shape{3, 5}, std::log(0.1));
  for (size_t t = 0; t < 3; ++t) blanks(t, 0) = std::log(0.6);
  CHECK(GreedyDecode(blanks).empty());
}

TEST_CASE("greedy equals the best single path found by enumeration") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor lp = RandomLogProbs(4, 3, rng);
    std::vector<int> best;
    double best_p = -1;
    oracle::ForEachPath(lp, [&](const std::vector<int> &path, double p) {
      if (p > best_p) {
        best_p = p;
        best = path;
      }
    });
    CHECK(GreedyDecode(lp) == oracle::CollapsePath(best));
  }
}

TEST_CASE("prefix scores") {
  SUBCASE("empty prefix, one frame") {
    std::mt19937_64 rng(17);
    Tensor lp = RandomLogProbs(1, 4, rng);
    CHECK(CtcPrefixScore(lp, {}, 3) == doctest::Approx(lp(0, 3)).epsilon(1e-14));
  }
  SUBCASE("uniform lattice: full sequence scores ln 0.75 at end of input") {
    // Blank and label 1 at 0.5 each; the eos column carries no mass.
    Tensor two(Shape{2, 3}, {std::log(0.5), std::log(0.5), kLogZero,
                             std::log(0.5), std::log(0.5), kLogZero});
    CHECK(CtcPrefixScore(two, std::vector<int>{1}, CharInventory::kEos) ==
          doctest::Approx(std::log(0.75)).epsilon(1e-12));
  }
  SUBCASE("blank is rejected") {
    CHECK_THROWS_AS(CtcPrefixScore(Uniform(2, 4), {}, 0), Error);
  }
  SUBCASE("random lattices match brute-force prefix mass") {
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 200; ++trial) {
      size_t T = 1 + trial % 5;
      const int V = 5;  // blank, unk, eos, two chars
      Tensor lp = RandomLogProbs(T, V, rng);
      std::uniform_int_distribution<int> lab(3, 4), len(0, 2);
      std::vector<int> prefix(len(rng));
      for (int &x : prefix) x = lab(rng);
      int next = lab(rng);
      std::vector<int> h = prefix;
      h.push_back(next);
      double expect = oracle::PrefixProbability(lp, h);
      double got = CtcPrefixScore(lp, prefix, next);
      if (expect == 0.0) {
        CHECK(got == kLogZero);
      } else {
        CHECK(std::abs(std::exp(got) - expect) <= 1e-9 * expect);
      }
      double full = oracle::TargetProbability(lp, prefix);
      if (full > 0) {
        double eos = CtcPrefixScore(lp, prefix, CharInventory::kEos);
        CHECK(std::abs(std::exp(eos) - full) <= 1e-9 * full);
      }
    }
  }
  SUBCASE("incremental scores telescope to the CTC loss") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
      Tensor lp = RandomLogProbs(8, 6, rng);
      std::vector<int> target = {3, 4, 4, 5};
      CtcPrefixScorer scorer(lp);
      auto st = scorer.Initial();
      double sum = 0.0;
      for (int id : target) {
        auto next = scorer.Extend(st, id);
        sum += next.score - st.score;
        st = next;
      }
      sum += scorer.Extend(st, CharInventory::kEos).score - st.score;
      CHECK(sum == doctest::Approx(-CtcLoss(lp, target).loss).epsilon(1e-9));
    }
  }
}

TEST_CASE("viterbi alignment locates label onsets") {
  // 6 frames, labels 3 and 4: path  -, 3, 3, -, 4, -
  Tensor lp(Shape{6, 5}, std::log(0.025));
  int path[] = {0, 3, 3, 0, 4, 0};
  for (size_t t = 0; t < 6; ++t) lp(t, path[t]) = std::log(0.9);
  std::vector<size_t> starts = CtcAlign(lp, std::vector<int>{3, 4});
  REQUIRE(starts.size() == 2);
  CHECK(starts[0] == 1);
  CHECK(starts[1] == 4);
}

}  // namespace fieldasr
