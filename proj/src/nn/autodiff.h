// nn/autodiff.h

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

#ifndef FIELDASR_NN_AUTODIFF_H_
#define FIELDASR_NN_AUTODIFF_H_

#include <deque>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>

#include "nn/tensor.h"

namespace fieldasr {
namespace nn {

/// A trainable array. The tape accumulates into `grad` during Backward();
/// callers zero it between steps.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {}
  void ZeroGrad() { grad = Tensor(value.shape()); }
};

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
// tape is alive.
class Var {
 public:
  Var() = default;
  const Tensor &value() const;
  const Shape &shape() const { return value().shape(); }
  Tape *tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape *tape, int id) : tape_(tape), id_(id) {}
  Tape *tape_ = nullptr;
  int id_ = -1;
};

/// Records operations in execution order; that order is a topological order
/// of the graph, so Backward() is a single reverse sweep. A tape belongs to
/// one thread. Gradients can be taken once per tape.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape &, int)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var Constant(Tensor value);
  // A leaf whose gradient can be read back with Grad().
  Var Input(Tensor value);
  // A leaf bound to a parameter; Backward() adds into p.grad. Repeated calls
  // with the same parameter return the same node.
  Var Param(Parameter &p);

  void Backward(Var loss);
  // Gradient of the last Backward() root w.r.t. v (zeros if none flowed).
  Tensor Grad(Var v) const;

  bool grad_enabled() const { return grad_enabled_; }
  size_t num_nodes() const { return nodes_.size(); }
  void set_check_finite(bool check) { check_finite_ = check; }

  // Op-author interface.
  Var Record(const char *op, Tensor value, std::span<const Var> parents,
             BackwardFn backward);
  Var Record(const char *op, Tensor value, std::initializer_list<Var> parents,
             BackwardFn backward) {
    return Record(op, std::move(value),
                  std::span<const Var>(parents.begin(), parents.size()),
                  std::move(backward));
  }
  bool RequiresGrad(int id) const { return nodes_[id].requires_grad; }
  const Tensor &Value(int id) const { return nodes_[id].value; }
  const Tensor &OutGrad(int id) const { return nodes_[id].grad; }
  // Zero-initialized on first access.
  Tensor &GradBuffer(int id);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    BackwardFn backward;
    Parameter *param = nullptr;
  };

  Var Push(Node node);

  std::deque<Node> nodes_;
  std::unordered_map<Parameter *, int> param_nodes_;
  bool grad_enabled_;
  bool check_finite_ = true;
  bool backward_done_ = false;
};

}  // namespace nn
}  // namespace fieldasr

#endif  // FIELDASR_NN_AUTODIFF_H_
