// nn/adadelta.h

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

#ifndef FIELDASR_NN_ADADELTA_H_
#define FIELDASR_NN_ADADELTA_H_

#include <map>
#include <span>
#include <string>

#include "nn/autodiff.h"

namespace fieldasr {
namespace nn {

struct AdadeltaConfig {
  double rho = 0.95;
  double epsilon = 1e-8;
  // Global gradient-norm clipping threshold; <= 0 disables clipping.
  double clip_norm = 5.0;
};

struct AdadeltaSlot {
  Tensor accum_grad_sq;
  Tensor accum_update_sq;
};

/// Adadelta (no global learning rate):
///   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
///   dx       = -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
///   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
///   x       <- x + dx
/// Accumulators are keyed by parameter name.
class Adadelta {
 public:
  explicit Adadelta(AdadeltaConfig config = {}) : config_(config) {}

  // Applies one update from each parameter's current grad. Returns the global
  // gradient norm measured before clipping. A non-finite gradient throws
  // ErrorKind::kNumeric naming the parameter and leaves all values untouched.
  double Step(std::span<Parameter *const> params);

  const AdadeltaConfig &config() const { return config_; }
  const AdadeltaSlot *slot(const std::string &name) const;

 private:
  AdadeltaConfig config_;
  std::map<std::string, AdadeltaSlot> slots_;
};

}  // namespace nn
}  // namespace fieldasr

#endif  // FIELDASR_NN_ADADELTA_H_
