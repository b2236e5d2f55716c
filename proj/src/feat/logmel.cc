// feat/logmel.cc

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

#include "feat/logmel.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "base/error.h"

namespace fieldasr {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex fftw_planner_mutex;

}  // namespace

size_t FeatureConfig::window_samples() const {
  return static_cast<size_t>(std::lround(window_ms * sample_rate / 1000.0));
}

size_t FeatureConfig::hop_samples() const {
  return static_cast<size_t>(std::lround(hop_ms * sample_rate / 1000.0));
}

void FeatureConfig::Validate() const {
  if (sample_rate <= 0) Fail(ErrorKind::kParameter, "sample_rate must be positive");
  if (hop_ms <= 0 || window_ms < hop_ms)
    Fail(ErrorKind::kParameter, "need window_ms >= hop_ms > 0, got ", window_ms, "/", hop_ms);
  if (hop_samples() == 0) Fail(ErrorKind::kParameter, "hop shorter than one sample");
  if (n_fft < static_cast<int>(window_samples()))
    Fail(ErrorKind::kParameter, "n_fft ", n_fft, " is smaller than the window (",
         window_samples(), " samples)");
  if (n_mels < 1) Fail(ErrorKind::kParameter, "n_mels must be >= 1");
  if (mel_fmin < 0 || fmax() <= mel_fmin || fmax() > sample_rate / 2.0)
    Fail(ErrorKind::kParameter, "bad mel range [", mel_fmin, ", ", fmax(), "]");
  if (!(log_floor > 0)) Fail(ErrorKind::kParameter, "log_floor must be positive");
}

size_t NumFrames(size_t num_samples, const FeatureConfig &cfg) {
  const size_t window = cfg.window_samples();
  if (num_samples < window)
    Fail(ErrorKind::kSize, "need at least ", window, " samples for one frame, got ",
         num_samples);
  return 1 + (num_samples - window) / cfg.hop_samples();
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

static std::vector<double> MelEdges(const FeatureConfig &cfg) {
  const double lo = HzToMel(cfg.mel_fmin), hi = HzToMel(cfg.fmax());
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i)
    edges[i] = MelToHz(lo + (hi - lo) * i / (cfg.n_mels + 1));
  return edges;
}

std::vector<double> MelCenterFrequencies(const FeatureConfig &cfg) {
  std::vector<double> edges = MelEdges(cfg);
  return std::vector<double>(edges.begin() + 1, edges.end() - 1);
}

nn::Tensor MelFilterbank(const FeatureConfig &cfg) {
  const size_t bins = static_cast<size_t>(cfg.n_fft / 2 + 1);
  std::vector<double> edges = MelEdges(cfg);
  nn::Tensor fb = nn::Tensor::Zeros(static_cast<size_t>(cfg.n_mels), bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    for (size_t k = 0; k < bins; ++k) {
      double f = static_cast<double>(k) * cfg.sample_rate / cfg.n_fft;
      double w = 0.0;
      if (f > left && f <= center) w = (f - left) / (center - left);
      else if (f > center && f < right) w = (right - f) / (right - center);
      fb(m, k) = w;
    }
  }
  return fb;
}

FeatureMatrix ComputeLogMel(std::span<const double> samples, const FeatureConfig &cfg,
                            const std::string &utterance_id) {
  cfg.Validate();
  const size_t frames = NumFrames(samples.size(), cfg);
  const size_t window = cfg.window_samples(), hop = cfg.hop_samples();
  const size_t n_fft = static_cast<size_t>(cfg.n_fft), bins = n_fft / 2 + 1;
  const size_t n_mels = static_cast<size_t>(cfg.n_mels);

  std::vector<double> hann(window);
  for (size_t i = 0; i < window; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / window);
  nn::Tensor fb = MelFilterbank(cfg);

  double *in = fftw_alloc_real(n_fft);
  fftw_complex *out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in, out, FFTW_ESTIMATE);
  }
  FeatureMatrix result{utterance_id, nn::Tensor::Zeros(frames, n_mels)};
  std::vector<double> power(bins);
  for (size_t t = 0; t < frames; ++t) {
    std::fill(in, in + n_fft, 0.0);
    for (size_t i = 0; i < window; ++i) in[i] = samples[t * hop + i] * hann[i];
    fftw_execute(plan);
    for (size_t k = 0; k < bins; ++k) power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    for (size_t m = 0; m < n_mels; ++m) {
      double e = 0.0;
      const double *w = fb.data() + m * bins;
      for (size_t k = 0; k < bins; ++k) e += w[k] * power[k];
      result.frames(t, m) = std::log(std::max(e, cfg.log_floor));
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

}  // namespace fieldasr
