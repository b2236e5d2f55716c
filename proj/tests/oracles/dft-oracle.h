// oracles/dft-oracle.h

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

// Reference log-mel computation by direct summation. Deliberately slow and
// written without sharing code with feat/logmel.cc.

#ifndef FIELDASR_TESTS_ORACLES_DFT_ORACLE_H_
#define FIELDASR_TESTS_ORACLES_DFT_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <vector>

namespace fieldasr {
namespace oracle {

inline std::vector<double> PowerSpectrum(const std::vector<double> &frame, int n_fft) {
  const double pi = std::acos(-1.0);
  std::vector<double> power(n_fft / 2 + 1);
  for (int k = 0; k <= n_fft / 2; ++k) {
    double re = 0, im = 0;
    for (size_t n = 0; n < frame.size(); ++n) {
      re += frame[n] * std::cos(2 * pi * k * n / n_fft);
      im -= frame[n] * std::sin(2 * pi * k * n / n_fft);
    }
    power[k] = re * re + im * im;
  }
  return power;
}

inline double Mel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }

// One frame of log-mel energies. Triangles are evaluated in Hz between mel
// spaced edges.
inline std::vector<double> LogMelFrame(const std::vector<double> &samples, size_t offset,
                                       size_t window, int n_fft, int rate, int n_mels,
                                       double fmin, double fmax, double floor) {
  const double pi = std::acos(-1.0);
  std::vector<double> frame(window);
  for (size_t n = 0; n < window; ++n)
    frame[n] = samples[offset + n] * (0.5 - 0.5 * std::cos(2 * pi * n / window));
  std::vector<double> power = PowerSpectrum(frame, n_fft);
  double lo = Mel(fmin), hi = Mel(fmax);
  std::vector<double> edge(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    double mel = lo + (hi - lo) * i / (n_mels + 1);
    edge[i] = 700.0 * (std::exp(mel / 1127.0) - 1.0);
  }
  std::vector<double> out(n_mels);
  for (int m = 0; m < n_mels; ++m) {
    double e = 0;
    for (int k = 0; k <= n_fft / 2; ++k) {
      double f = static_cast<double>(k) * rate / n_fft;
      double up = (f - edge[m]) / (edge[m + 1] - edge[m]);
      double down = (edge[m + 2] - f) / (edge[m + 2] - edge[m + 1]);
      double w = std::max(0.0, std::min(up, down));
      e += w * power[k];
    }
    out[m] = std::log(std::max(e, floor));
  }
  return out;
}

}  // namespace oracle
}  // namespace fieldasr

#endif  // FIELDASR_TESTS_ORACLES_DFT_ORACLE_H_
