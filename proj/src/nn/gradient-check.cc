// nn/gradient-check.cc

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

#include "nn/gradient-check.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fieldasr {
namespace nn {

double RelativeError(double analytic, double numeric, double floor) {
  double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

namespace {

void Record(GradCheckResult *r, const std::string &name, size_t index, double analytic,
            double numeric, double floor) {
  double rel = RelativeError(analytic, numeric, floor);
  r->max_abs_error = std::max(r->max_abs_error, std::abs(analytic - numeric));
  ++r->checked;
  if (rel >= r->max_rel_error) {
    r->max_rel_error = rel;
    std::ostringstream os;
    os.precision(12);
    os << name << "[" << index << "] analytic=" << analytic << " numeric=" << numeric;
    r->worst = os.str();
  }
}

}  // namespace

GradCheckResult CheckInputGradients(const InputLossFn &loss, std::vector<Tensor> inputs,
                                    double step, double floor) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor &t : inputs) vars.push_back(tape.Input(t));
    Var l = loss(tape, vars);
    tape.Backward(l);
    for (const Var &v : vars) analytic.push_back(tape.Grad(v));
  }
  auto eval = [&]() {
    Tape tape(false);
    std::vector<Var> vars;
    for (const Tensor &t : inputs) vars.push_back(tape.Constant(t));
    return loss(tape, vars).value().item();
  };
  GradCheckResult result;
  for (size_t i = 0; i < inputs.size(); ++i) {
    for (size_t j = 0; j < inputs[i].size(); ++j) {
      double saved = inputs[i][j];
      inputs[i][j] = saved + step;
      double up = eval();
      inputs[i][j] = saved - step;
      double down = eval();
      inputs[i][j] = saved;
      Record(&result, "input" + std::to_string(i), j, analytic[i][j],
             (up - down) / (2 * step), floor);
    }
  }
  return result;
}

GradCheckResult CheckParameterGradients(const ParamLossFn &loss,
                                        std::span<Parameter *const> params, double step,
                                        double floor, size_t max_per_param) {
  for (Parameter *p : params) p->ZeroGrad();
  {
    Tape tape;
    Var l = loss(tape);
    tape.Backward(l);
  }
  std::vector<Tensor> analytic;
  for (Parameter *p : params) analytic.push_back(p->grad);
  auto eval = [&]() {
    Tape tape(false);
    return loss(tape).value().item();
  };
  GradCheckResult result;
  for (size_t i = 0; i < params.size(); ++i) {
    Parameter *p = params[i];
    size_t n = p->value.size();
    size_t stride = (max_per_param == 0 || n <= max_per_param) ? 1 : n / max_per_param;
    for (size_t j = 0; j < n; j += stride) {
      double saved = p->value[j];
      p->value[j] = saved + step;
      double up = eval();
      p->value[j] = saved - step;
      double down = eval();
      p->value[j] = saved;
      Record(&result, p->name, j, analytic[i][j], (up - down) / (2 * step), floor);
    }
  }
  return result;
}

}  // namespace nn
}  // namespace fieldasr
