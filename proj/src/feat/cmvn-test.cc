// feat/cmvn-test.cc

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
#include "feat/cmvn.h"
#include "feat/feature-archive.h"

namespace fieldasr {

static FeatureMatrix RandomFeatures(std::mt19937 &rng, size_t frames, size_t dim,
                                    const std::string &id) {
  std::normal_distribution<double> d(3.0, 2.0);
  FeatureMatrix f{id, nn::Tensor::Zeros(frames, dim)};
  for (double &v : f.frames.values()) v = d(rng);
  return f;
}

TEST_CASE("applied to the training set gives zero mean, unit stddev") {
  std::mt19937 rng(1);
  std::vector<FeatureMatrix> train = {RandomFeatures(rng, 50, 6, "a"),
                                      RandomFeatures(rng, 31, 6, "b")};
  CmvnStats stats = CmvnFit(train);
  std::vector<double> sum(6, 0), sq(6, 0);
  size_t n = 0;
  for (const FeatureMatrix &f : train) {
    FeatureMatrix g = CmvnApply(f, stats);
    for (size_t t = 0; t < g.num_frames(); ++t, ++n)
      for (size_t d = 0; d < 6; ++d) {
        sum[d] += g.frames(t, d);
        sq[d] += g.frames(t, d) * g.frames(t, d);
      }
  }
  for (size_t d = 0; d < 6; ++d) {
    double mean = sum[d] / n;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(sq[d] / n - mean * mean) - 1.0) < 1e-6);
  }
}

TEST_CASE("matches a two-pass reference") {
  std::mt19937 rng(2);
  std::vector<FeatureMatrix> train;
  for (int i = 0; i < 5; ++i) train.push_back(RandomFeatures(rng, 10 + 7 * i, 4, "u"));
  CmvnStats stats = CmvnFit(train);
  // Pass 1: mean. Pass 2: squared deviations.
  std::vector<double> mean(4, 0), var(4, 0);
  size_t n = 0;
  for (const FeatureMatrix &f : train)
    for (size_t t = 0; t < f.num_frames(); ++t, ++n)
      for (size_t d = 0; d < 4; ++d) mean[d] += f.frames(t, d);
  for (double &m : mean) m /= n;
  for (const FeatureMatrix &f : train)
    for (size_t t = 0; t < f.num_frames(); ++t)
      for (size_t d = 0; d < 4; ++d) var[d] += std::pow(f.frames(t, d) - mean[d], 2);
  for (size_t d = 0; d < 4; ++d) {
    CHECK(stats.mean[d] == doctest::Approx(mean[d]).epsilon(1e-12));
    CHECK(stats.stddev[d] == doctest::Approx(std::sqrt(var[d] / n)).epsilon(1e-12));
  }
  FeatureMatrix g = CmvnApply(train[3], stats);
  for (size_t t = 0; t < g.num_frames(); ++t)
    for (size_t d = 0; d < 4; ++d)
      CHECK(g.frames(t, d) ==
            doctest::Approx((train[3].frames(t, d) - mean[d]) / std::sqrt(var[d] / n))
                .epsilon(1e-10));
}

TEST_CASE("constant bin is clamped and stays finite") {
  std::mt19937 rng(3);
  FeatureMatrix f = RandomFeatures(rng, 20, 3, "c");
  for (size_t t = 0; t < 20; ++t) f.frames(t, 1) = -23.0;
  CmvnStats stats = CmvnFit(std::span<const FeatureMatrix>(&f, 1));
  CHECK(stats.stddev[1] == 1e-8);
  FeatureMatrix g = CmvnApply(f, stats);
  CHECK(g.frames.AllFinite());
  CHECK(g.frames(4, 1) == 0.0);
}

TEST_CASE("fit errors") {
  std::vector<FeatureMatrix> none;
  CHECK_THROWS_AS(CmvnFit(none), Error);
  std::vector<FeatureMatrix> one = {FeatureMatrix{"x", nn::Tensor::Zeros(1, 3)}};
  try {
    CmvnFit(one);
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kSize);
  }
  std::vector<FeatureMatrix> mixed = {FeatureMatrix{"x", nn::Tensor::Zeros(2, 3)},
                                      FeatureMatrix{"y", nn::Tensor::Zeros(2, 4)}};
  CHECK_THROWS_AS(CmvnFit(mixed), Error);
}

TEST_CASE("feature archive round trip at f32 precision") {
  std::mt19937 rng(4);
  std::vector<FeatureMatrix> feats = {RandomFeatures(rng, 5, 3, "spk-rec-00000001"),
                                      RandomFeatures(rng, 0, 3, "empty"),
                                      RandomFeatures(rng, 9, 3, "ʈʂʰ")};
  std::string bytes = EncodeFeatureArchive(feats);
  CHECK(bytes.size() == (4 + 16 + 8 + 60) + (4 + 5 + 8) + (4 + 6 + 8 + 108));
  std::vector<FeatureMatrix> back = DecodeFeatureArchive(bytes);
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back[i].utterance_id == feats[i].utterance_id);
    CHECK(back[i].frames.shape() == feats[i].frames.shape());
    for (size_t k = 0; k < feats[i].frames.size(); ++k)
      CHECK(back[i].frames[k] == static_cast<double>(static_cast<float>(feats[i].frames[k])));
  }
  // Little-endian header.
  CHECK(bytes.substr(0, 4) == std::string("\x10\x00\x00\x00", 4));
  CHECK_THROWS_AS(DecodeFeatureArchive(bytes.substr(0, bytes.size() - 1)), Error);
}

}  // namespace fieldasr
