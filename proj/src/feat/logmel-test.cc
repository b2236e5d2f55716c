// feat/logmel-test.cc

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
#include <numbers>
#include <random>

#include "base/error.h"
#include "dft-oracle.h"
#include "feat/logmel.h"

namespace fieldasr {

// Compares in the energy domain: bins far from the tone sit near the floor,
// where FFT roundoff relative to the peak dominates their log value.
static void CheckClose(const nn::Tensor &frames, size_t t, const std::vector<double> &ref) {
  double peak = 0;
  for (double r : ref) peak = std::max(peak, std::exp(r));
  for (size_t m = 0; m < ref.size(); ++m)
    CHECK(std::abs(std::exp(frames(t, m)) - std::exp(ref[m])) <=
          1e-9 * (std::exp(ref[m]) + peak) + 1e-12);
}

static std::vector<double> Sine(double hz, size_t n, int rate, double amp = 0.5) {
  std::vector<double> s(n);
  for (size_t i = 0; i < n; ++i) s[i] = amp * std::sin(2 * std::numbers::pi * hz * i / rate);
  return s;
}

TEST_CASE("one second at 16k gives 98 frames of 40 bins") {
  FeatureConfig cfg;
  std::vector<double> s(16000, 0.0);
  FeatureMatrix f = ComputeLogMel(s, cfg, "u");
  CHECK(f.num_frames() == 98);
  CHECK(f.dim() == 40);
  CHECK(f.utterance_id == "u");
}

TEST_CASE("frame count formula for every length near the boundary") {
  FeatureConfig cfg;
  for (size_t n = 400; n < 1200; n += 7) {
    std::vector<double> s(n, 0.01);
    CHECK(ComputeLogMel(s, cfg).num_frames() == 1 + (n - 400) / 160);
  }
}

TEST_CASE("silence is floored") {
  FeatureConfig cfg;
  std::vector<double> s(4000, 0.0);
  FeatureMatrix f = ComputeLogMel(s, cfg);
  for (double v : f.frames.values()) CHECK(v == doctest::Approx(-23.0259).epsilon(1e-5));
  for (double v : f.frames.values()) CHECK(v == std::log(1e-10));
}

TEST_CASE("too short input names the minimum") {
  FeatureConfig cfg;
  std::vector<double> s(399, 0.0);
  try {
    ComputeLogMel(s, cfg);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kSize);
    CHECK(std::string(e.what()).find("400") != std::string::npos);
  }
}

TEST_CASE("config validation") {
  FeatureConfig cfg;
  cfg.window_ms = 5;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = FeatureConfig();
  cfg.n_fft = 256;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = FeatureConfig();
  cfg.n_mels = 0;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  CHECK_NOTHROW(FeatureConfig().Validate());
}

TEST_CASE("sine at a band centre peaks in that band, matching direct DFT") {
  FeatureConfig cfg;
  std::vector<double> centers = MelCenterFrequencies(cfg);
  for (int band : {8, 15, 22, 30, 37}) {
    CAPTURE(band);
    std::vector<double> s = Sine(centers[band], 1600, cfg.sample_rate);
    FeatureMatrix f = ComputeLogMel(s, cfg);
    for (size_t t = 0; t < f.num_frames(); t += 3) {
      std::vector<double> ref = oracle::LogMelFrame(s, t * 160, 400, 512, 16000, 40, 20.0,
                                                    8000.0, 1e-10);
      CheckClose(f.frames, t, ref);
      size_t argmax = 0, ref_argmax = 0;
      for (size_t m = 0; m < 40; ++m) {
        if (f.frames(t, m) > f.frames(t, argmax)) argmax = m;
        if (ref[m] > ref[ref_argmax]) ref_argmax = m;
      }
      CHECK(argmax == static_cast<size_t>(band));
      CHECK(ref_argmax == static_cast<size_t>(band));
    }
  }
}

TEST_CASE("random noise matches the direct DFT and is finite and deterministic") {
  FeatureConfig cfg;
  std::mt19937 rng(7);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> s(1000);
  for (double &x : s) x = noise(rng);
  FeatureMatrix a = ComputeLogMel(s, cfg), b = ComputeLogMel(s, cfg);
  CHECK(a.frames.vector() == b.frames.vector());
  CHECK(a.frames.AllFinite());
  for (size_t t = 0; t < a.num_frames(); ++t) {
    std::vector<double> ref =
        oracle::LogMelFrame(s, t * 160, 400, 512, 16000, 40, 20.0, 8000.0, 1e-10);
    CheckClose(a.frames, t, ref);
  }
}

TEST_CASE("mel scale round trip") {
  for (double hz : {0.0, 20.0, 440.0, 1000.0, 8000.0})
    CHECK(MelToHz(HzToMel(hz)) == doctest::Approx(hz).epsilon(1e-12));
  CHECK(HzToMel(1000.0) == doctest::Approx(1000.0).epsilon(1e-3));
}

}  // namespace fieldasr
