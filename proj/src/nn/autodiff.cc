// nn/autodiff.cc

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

#include "nn/autodiff.h"

#include "base/error.h"

namespace fieldasr {
namespace nn {

const Tensor &Var::value() const {
  if (tape_ == nullptr) Fail(ErrorKind::kState, "use of an unbound Var");
  return tape_->Value(id_);
}

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return Push(std::move(n));
}

Var Tape::Input(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = grad_enabled_;
  return Push(std::move(n));
}

Var Tape::Param(Parameter &p) {
  auto it = param_nodes_.find(&p);
  if (it != param_nodes_.end()) return Var(this, it->second);
  Node n;
  n.value = p.value;
  n.requires_grad = grad_enabled_;
  n.param = grad_enabled_ ? &p : nullptr;
  Var v = Push(std::move(n));
  param_nodes_.emplace(&p, v.id());
  return v;
}

Var Tape::Record(const char *op, Tensor value, std::span<const Var> parents,
                 BackwardFn backward) {
  if (check_finite_ && !value.AllFinite())
    Fail(ErrorKind::kNumeric, "non-finite value produced by ", op);
  Node n;
  n.value = std::move(value);
  if (grad_enabled_) {
    for (const Var &p : parents) {
      if (p.tape() != this) Fail(ErrorKind::kState, op, ": operand from another tape");
      if (nodes_[p.id()].requires_grad) n.requires_grad = true;
    }
    if (n.requires_grad) n.backward = std::move(backward);
  }
  return Push(std::move(n));
}

Tensor &Tape::GradBuffer(int id) {
  Node &n = nodes_[id];
  if (n.grad.size() != n.value.size() || n.grad.shape() != n.value.shape())
    n.grad = Tensor(n.value.shape());
  return n.grad;
}

void Tape::Backward(Var loss) {
  if (loss.tape() != this) Fail(ErrorKind::kState, "Backward: loss from another tape");
  if (backward_done_)
    Fail(ErrorKind::kState, "Backward called twice on one tape; re-run the forward pass");
  const Tensor &lv = nodes_[loss.id()].value;
  if (lv.size() != 1 || lv.rank() > 2)
    Fail(ErrorKind::kShape, "Backward needs a scalar loss, got shape ",
         ShapeToString(lv.shape()));
  backward_done_ = true;
  if (!nodes_[loss.id()].requires_grad) return;
  GradBuffer(loss.id()).Fill(1.0);
  for (int id = loss.id(); id >= 0; --id) {
    Node &n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param != nullptr) {
      if (n.param->grad.size() != n.value.size()) n.param->ZeroGrad();
      n.param->grad.AddScaled(n.grad);
    }
  }
}

Tensor Tape::Grad(Var v) const {
  const Node &n = nodes_[v.id()];
  if (n.grad.size() == n.value.size() && n.grad.shape() == n.value.shape()) return n.grad;
  return Tensor(n.value.shape());
}

}  // namespace nn
}  // namespace fieldasr
