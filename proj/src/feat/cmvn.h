// feat/cmvn.h

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

#ifndef FIELDASR_FEAT_CMVN_H_
#define FIELDASR_FEAT_CMVN_H_

#include <span>
#include <vector>

#include "feat/logmel.h"

namespace fieldasr {

inline constexpr double kMinCmvnStddev = 1e-8;

// Per-bin mean and (population) standard deviation, clamped from below.
struct CmvnStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

// Fits over all frames of the given (training) features; needs >= 2 frames.
CmvnStats CmvnFit(std::span<const FeatureMatrix> features);
// (x - mean) / stddev per bin.
FeatureMatrix CmvnApply(const FeatureMatrix &features, const CmvnStats &stats);

}  // namespace fieldasr

#endif  // FIELDASR_FEAT_CMVN_H_
