// feat/logmel.h

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

#ifndef FIELDASR_FEAT_LOGMEL_H_
#define FIELDASR_FEAT_LOGMEL_H_

#include <span>
#include <string>
#include <vector>

#include "nn/tensor.h"

namespace fieldasr {

struct FeatureConfig {
  int sample_rate = 16000;
  double window_ms = 25.0;
  double hop_ms = 10.0;
  int n_fft = 512;
  int n_mels = 40;
  double mel_fmin = 20.0;
  double mel_fmax = -1.0;  // <= 0 means sample_rate / 2
  double log_floor = 1e-10;

  size_t window_samples() const;
  size_t hop_samples() const;
  double fmax() const { return mel_fmax > 0 ? mel_fmax : sample_rate / 2.0; }
  // Throws kParameter when window < hop, n_fft < window, n_mels < 1, ...
  void Validate() const;
};

struct FeatureMatrix {
  std::string utterance_id;
  nn::Tensor frames;  // T x n_mels

  size_t num_frames() const { return frames.rows(); }
  size_t dim() const { return frames.cols(); }
};

// 1 + floor((samples - window) / hop); throws kSize when samples < window.
size_t NumFrames(size_t num_samples, const FeatureConfig &cfg);

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters on the HTK mel scale, n_mels x (n_fft / 2 + 1).
// Filter m rises from edge m to its centre at edge m+1 and falls to edge m+2,
// where the n_mels + 2 edges are equally spaced in mel over [fmin, fmax].
nn::Tensor MelFilterbank(const FeatureConfig &cfg);
std::vector<double> MelCenterFrequencies(const FeatureConfig &cfg);

// Periodic Hann window, |FFT|^2, mel filterbank, ln(max(E, log_floor)).
FeatureMatrix ComputeLogMel(std::span<const double> samples, const FeatureConfig &cfg,
                            const std::string &utterance_id = "");

}  // namespace fieldasr

#endif  // FIELDASR_FEAT_LOGMEL_H_
