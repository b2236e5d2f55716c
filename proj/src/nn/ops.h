// nn/ops.h

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

#ifndef FIELDASR_NN_OPS_H_
#define FIELDASR_NN_OPS_H_

#include <span>
#include <vector>

#include "nn/autodiff.h"

namespace fieldasr {
namespace nn {

// Differentiable operations. Unless noted, operands are rank-2 and a rank-1
// tensor is treated as a single row. Shape mismatches throw
// ErrorKind::kShape naming the op and both shapes.

Var MatMul(Var a, Var b);
// a + b where b has a's shape or is a single row broadcast over a's rows.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var a, double factor);
Var Tanh(Var a);
Var Sigmoid(Var a);
// Normalizes along axis 0 (columns) or 1 / -1 (rows). Max-subtracted.
Var Softmax(Var a, int axis = -1);
Var LogSoftmax(Var a, int axis = -1);
Var Concat(std::span<const Var> parts, int axis);
Var Slice(Var a, int axis, size_t begin, size_t end);
Var Transpose(Var a);
// Rows of `table` ([V, D]) selected by ids, giving [ids.size(), D].
Var EmbeddingLookup(Var table, std::span<const int> ids);
// Mean over rows i with targets[i] != ignore_index of
// -log_softmax(logits)[i, targets[i]]. Zero when every row is ignored.
Var CrossEntropy(Var logits, std::span<const int> targets, int ignore_index = -1);
Var Sum(Var a);

// Non-differentiable helpers shared by ops and decoders.
void SoftmaxRowsInPlace(Tensor *t);
void LogSoftmaxRowsInPlace(Tensor *t);

}  // namespace nn
}  // namespace fieldasr

#endif  // FIELDASR_NN_OPS_H_
