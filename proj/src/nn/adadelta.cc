// nn/adadelta.cc

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

#include "nn/adadelta.h"

#include <cmath>

#include "base/error.h"

namespace fieldasr {
namespace nn {

const AdadeltaSlot *Adadelta::slot(const std::string &name) const {
  auto it = slots_.find(name);
  return it == slots_.end() ? nullptr : &it->second;
}

double Adadelta::Step(std::span<Parameter *const> params) {
  double sq_norm = 0.0;
  for (Parameter *p : params) {
    if (p->grad.size() != p->value.size())
      Fail(ErrorKind::kShape, "adadelta: gradient of ", p->name, " has shape ",
           ShapeToString(p->grad.shape()), ", parameter has ",
           ShapeToString(p->value.shape()));
    if (!p->grad.AllFinite())
      Fail(ErrorKind::kNumeric, "adadelta: non-finite gradient for parameter ", p->name);
    for (double g : p->grad.values()) sq_norm += g * g;
  }
  const double norm = std::sqrt(sq_norm);
  const double scale =
      (config_.clip_norm > 0 && norm > config_.clip_norm) ? config_.clip_norm / norm : 1.0;
  const double rho = config_.rho, eps = config_.epsilon;
  for (Parameter *p : params) {
    AdadeltaSlot &s = slots_[p->name];
    if (s.accum_grad_sq.size() != p->value.size()) {
      s.accum_grad_sq = Tensor(p->value.shape());
      s.accum_update_sq = Tensor(p->value.shape());
    }
    double *x = p->value.data();
    const double *grad = p->grad.data();
    double *eg = s.accum_grad_sq.data(), *edx = s.accum_update_sq.data();
    for (size_t i = 0; i < p->value.size(); ++i) {
      double g = grad[i] * scale;
      eg[i] = rho * eg[i] + (1.0 - rho) * g * g;
      double dx = -std::sqrt(edx[i] + eps) / std::sqrt(eg[i] + eps) * g;
      edx[i] = rho * edx[i] + (1.0 - rho) * dx * dx;
      x[i] += dx;
    }
  }
  return norm;
}

}  // namespace nn
}  // namespace fieldasr
