// feat/cmvn.cc

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

#include "feat/cmvn.h"

#include <algorithm>
#include <cmath>

#include "base/error.h"

namespace fieldasr {

CmvnStats CmvnFit(std::span<const FeatureMatrix> features) {
  size_t dim = 0, count = 0;
  for (const FeatureMatrix &f : features) {
    if (f.num_frames() == 0) continue;
    if (dim == 0) dim = f.dim();
    if (f.dim() != dim)
      Fail(ErrorKind::kShape, "cmvn: feature dim ", f.dim(), " in ", f.utterance_id,
           " differs from ", dim);
    count += f.num_frames();
  }
  if (count < 2) Fail(ErrorKind::kSize, "cmvn: need at least 2 frames, got ", count);
  // Welford's single-pass update per bin.
  std::vector<double> mean(dim, 0.0), m2(dim, 0.0);
  size_t n = 0;
  for (const FeatureMatrix &f : features) {
    for (size_t t = 0; t < f.num_frames(); ++t) {
      ++n;
      for (size_t d = 0; d < dim; ++d) {
        double x = f.frames(t, d);
        double delta = x - mean[d];
        mean[d] += delta / static_cast<double>(n);
        m2[d] += delta * (x - mean[d]);
      }
    }
  }
  CmvnStats stats{mean, std::vector<double>(dim)};
  for (size_t d = 0; d < dim; ++d)
    stats.stddev[d] = std::max(std::sqrt(m2[d] / static_cast<double>(n)), kMinCmvnStddev);
  return stats;
}

FeatureMatrix CmvnApply(const FeatureMatrix &features, const CmvnStats &stats) {
  if (features.dim() != stats.mean.size())
    Fail(ErrorKind::kShape, "cmvn: feature dim ", features.dim(), " vs stats dim ",
         stats.mean.size());
  FeatureMatrix out = features;
  for (size_t t = 0; t < out.num_frames(); ++t)
    for (size_t d = 0; d < out.dim(); ++d)
      out.frames(t, d) = (out.frames(t, d) - stats.mean[d]) / stats.stddev[d];
  return out;
}

}  // namespace fieldasr
