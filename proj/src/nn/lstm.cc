// nn/lstm.cc

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

#include "nn/lstm.h"

#include "base/error.h"
#include "nn/ops.h"

namespace fieldasr {
namespace nn {

void LstmParams::Collect(std::vector<Parameter *> *out) {
  out->push_back(&w_input);
  out->push_back(&w_hidden);
  out->push_back(&bias);
}

LstmParams MakeLstmParams(const std::string &prefix, size_t input_dim, size_t hidden) {
  if (input_dim == 0 || hidden == 0)
    Fail(ErrorKind::kParameter, "lstm ", prefix, ": sizes must be positive");
  LstmParams p;
  p.w_input = Parameter(prefix + ".w_input", Tensor::Zeros(input_dim, 4 * hidden));
  p.w_hidden = Parameter(prefix + ".w_hidden", Tensor::Zeros(hidden, 4 * hidden));
  p.bias = Parameter(prefix + ".bias", Tensor::Zeros(1, 4 * hidden));
  return p;
}

void BiLstmParams::Collect(std::vector<Parameter *> *out) {
  forward.Collect(out);
  backward.Collect(out);
}

BiLstmParams MakeBiLstmParams(const std::string &prefix, size_t input_dim, size_t hidden) {
  return {MakeLstmParams(prefix + ".fwd", input_dim, hidden),
          MakeLstmParams(prefix + ".bwd", input_dim, hidden)};
}

LstmState ZeroLstmState(Tape &tape, size_t hidden) {
  return {tape.Constant(Tensor::Zeros(1, hidden)), tape.Constant(Tensor::Zeros(1, hidden))};
}

LstmState LstmCellFromProjection(Var gates_x, const LstmState &prev, Var w_hidden) {
  size_t hidden = w_hidden.value().rows();
  if (gates_x.value().rows() != 1 || gates_x.value().cols() != 4 * hidden ||
      prev.h.value().cols() != hidden || prev.c.value().cols() != hidden)
    Fail(ErrorKind::kShape, "shape mismatch in lstm_cell: gates ",
         ShapeToString(gates_x.shape()), ", h ", ShapeToString(prev.h.shape()), ", c ",
         ShapeToString(prev.c.shape()), ", w_hidden ", ShapeToString(w_hidden.shape()));
  Var gates = Add(gates_x, MatMul(prev.h, w_hidden));
  Var i = Sigmoid(Slice(gates, 1, 0, hidden));
  Var f = Sigmoid(Slice(gates, 1, hidden, 2 * hidden));
  Var g = Tanh(Slice(gates, 1, 2 * hidden, 3 * hidden));
  Var o = Sigmoid(Slice(gates, 1, 3 * hidden, 4 * hidden));
  Var c = Add(Mul(f, prev.c), Mul(i, g));
  Var h = Mul(o, Tanh(c));
  return {h, c};
}

LstmState LstmCell(Var x, const LstmState &prev, Var w_input, Var w_hidden, Var bias) {
  return LstmCellFromProjection(Add(MatMul(x, w_input), bias), prev, w_hidden);
}

Var LstmLayer(Tape &tape, Var sequence, LstmParams &params, bool reverse) {
  const size_t frames = sequence.value().rows();
  if (sequence.value().cols() != params.input_dim())
    Fail(ErrorKind::kShape, "shape mismatch in lstm layer: input ",
         ShapeToString(sequence.shape()), " vs w_input ",
         ShapeToString(params.w_input.value.shape()));
  if (frames == 0) Fail(ErrorKind::kShape, "lstm layer on an empty sequence");
  Var w_hidden = tape.Param(params.w_hidden);
  Var projected = Add(MatMul(sequence, tape.Param(params.w_input)), tape.Param(params.bias));
  LstmState state = ZeroLstmState(tape, params.hidden());
  std::vector<Var> outputs(frames);
  for (size_t step = 0; step < frames; ++step) {
    size_t t = reverse ? frames - 1 - step : step;
    state = LstmCellFromProjection(Slice(projected, 0, t, t + 1), state, w_hidden);
    outputs[t] = state.h;
  }
  return Concat(outputs, 0);
}

Var BiLstmLayer(Tape &tape, Var sequence, BiLstmParams &params) {
  Var fwd = LstmLayer(tape, sequence, params.forward, false);
  Var bwd = LstmLayer(tape, sequence, params.backward, true);
  Var both[] = {fwd, bwd};
  return Concat(both, 1);
}

}  // namespace nn
}  // namespace fieldasr
