// nn/gradient-check.h

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

#ifndef FIELDASR_NN_GRADIENT_CHECK_H_
#define FIELDASR_NN_GRADIENT_CHECK_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nn/autodiff.h"

namespace fieldasr {
namespace nn {

// Central finite differences against the tape's analytic gradients. The
// numeric side only evaluates forward values, so it is independent of every
// registered backward rule.
struct GradCheckResult {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  size_t checked = 0;
  std::string worst;  // "<input>[<index>] analytic=.. numeric=.."
};

// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
// gradient is ~0 from dividing rounding noise by ~0.
double RelativeError(double analytic, double numeric, double floor);

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckFloor = 1e-6;

using InputLossFn = std::function<Var(Tape &, std::span<const Var>)>;
GradCheckResult CheckInputGradients(const InputLossFn &loss,
                                    std::vector<Tensor> inputs,
                                    double step = kGradCheckStep,
                                    double floor = kGradCheckFloor);

using ParamLossFn = std::function<Var(Tape &)>;
// Perturbs parameter values in place (restoring them afterwards). At most
// `max_per_param` entries per parameter are checked, spread evenly; 0 = all.
GradCheckResult CheckParameterGradients(const ParamLossFn &loss,
                                        std::span<Parameter *const> params,
                                        double step = kGradCheckStep,
                                        double floor = kGradCheckFloor,
                                        size_t max_per_param = 0);

}  // namespace nn
}  // namespace fieldasr

#endif  // FIELDASR_NN_GRADIENT_CHECK_H_
