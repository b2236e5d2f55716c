// tests/oracles/ctc-oracle.h

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

// Exhaustive path enumeration for small CTC lattices. Deliberately naive:
// probabilities are accumulated in the linear domain, path by path, with its
// own collapse routine, so it shares no code with ctc/ctc.cc.

#ifndef FIELDASR_TESTS_ORACLES_CTC_ORACLE_H_
#define FIELDASR_TESTS_ORACLES_CTC_ORACLE_H_

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "nn/tensor.h"

namespace fieldasr {
namespace oracle {

inline std::vector<int> CollapsePath(const std::vector<int> &path) {
  std::vector<int> out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i > 0 && path[i] == path[i - 1]) continue;
    if (path[i] != 0) out.push_back(path[i]);
  }
  return out;
}

// Calls visit(path, probability) for all V^T frame paths.
inline void ForEachPath(const nn::Tensor &log_probs,
                        const std::function<void(const std::vector<int> &, double)> &visit) {
  const size_t T = log_probs.rows(), V = log_probs.cols();
  std::vector<int> path(T, 0);
  while (true) {
    double p = 1.0;
    for (size_t t = 0; t < T; ++t) p *= std::exp(log_probs[t * V + path[t]]);
    visit(path, p);
    size_t t = 0;
    while (t < T && ++path[t] == static_cast<int>(V)) path[t++] = 0;
    if (t == T) break;
  }
}

// Probability mass of every collapsed labeling.
inline std::map<std::vector<int>, double> LabelingMass(const nn::Tensor &log_probs) {
  std::map<std::vector<int>, double> mass;
  ForEachPath(log_probs, [&](const std::vector<int> &path, double p) {
    mass[CollapsePath(path)] += p;
  });
  return mass;
}

inline double TargetProbability(const nn::Tensor &log_probs, const std::vector<int> &target) {
  double total = 0.0;
  ForEachPath(log_probs, [&](const std::vector<int> &path, double p) {
    if (CollapsePath(path) == target) total += p;
  });
  return total;
}

// Mass of paths whose collapsed labeling starts with `prefix`.
inline double PrefixProbability(const nn::Tensor &log_probs, const std::vector<int> &prefix) {
  double total = 0.0;
  ForEachPath(log_probs, [&](const std::vector<int> &path, double p) {
    std::vector<int> lab = CollapsePath(path);
    if (lab.size() >= prefix.size() &&
        std::equal(prefix.begin(), prefix.end(), lab.begin()))
      total += p;
  });
  return total;
}

// Derivative of -log p(target) w.r.t. log_probs[t][k] by direct counting:
// p = sum over paths of prod_t y_t(path_t), so d p / d log y_t(k) is the mass
// of valid paths that visit k at t.
inline nn::Tensor TargetGradient(const nn::Tensor &log_probs, const std::vector<int> &target) {
  const size_t V = log_probs.cols();
  nn::Tensor visit(log_probs.shape());
  double total = 0.0;
  ForEachPath(log_probs, [&](const std::vector<int> &path, double p) {
    if (CollapsePath(path) != target) return;
    total += p;
    for (size_t t = 0; t < path.size(); ++t) visit[t * V + path[t]] += p;
  });
  for (size_t i = 0; i < visit.size(); ++i) visit[i] = -visit[i] / total;
  return visit;
}

}  // namespace oracle
}  // namespace fieldasr

#endif  // FIELDASR_TESTS_ORACLES_CTC_ORACLE_H_
