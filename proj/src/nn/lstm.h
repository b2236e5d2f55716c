// nn/lstm.h

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

#ifndef FIELDASR_NN_LSTM_H_
#define FIELDASR_NN_LSTM_H_

#include <string>
#include <vector>

#include "nn/autodiff.h"

namespace fieldasr {
namespace nn {

// Gate blocks are laid out as [input | forget | cell | output] along the
// 4H axis of every parameter.
struct LstmParams {
  Parameter w_input;   // [in, 4H]
  Parameter w_hidden;  // [H, 4H]
  Parameter bias;      // [1, 4H]

  size_t input_dim() const { return w_input.value.rows(); }
  size_t hidden() const { return w_hidden.value.rows(); }
  void Collect(std::vector<Parameter *> *out);
};

// Zero-initialized parameters named <prefix>.w_input etc.
LstmParams MakeLstmParams(const std::string &prefix, size_t input_dim, size_t hidden);

struct BiLstmParams {
  LstmParams forward;
  LstmParams backward;
  void Collect(std::vector<Parameter *> *out);
};

BiLstmParams MakeBiLstmParams(const std::string &prefix, size_t input_dim, size_t hidden);

struct LstmState {
  Var h;  // [1, H]
  Var c;  // [1, H]
};

LstmState ZeroLstmState(Tape &tape, size_t hidden);

// Standard LSTM step:
//   i = sig(.), f = sig(.), g = tanh(.), o = sig(.) over x W_in + h W_h + b
//   c' = f * c + i * g,  h' = o * tanh(c')
LstmState LstmCell(Var x, const LstmState &prev, Var w_input, Var w_hidden, Var bias);

// Same step, with x W_in + b already computed for this frame ([1, 4H]).
LstmState LstmCellFromProjection(Var gates_x, const LstmState &prev, Var w_hidden);

// Runs one direction over sequence [T, in]; returns [T, H] in input order.
Var LstmLayer(Tape &tape, Var sequence, LstmParams &params, bool reverse);

// Forward and backward passes concatenated per frame: [T, 2H].
Var BiLstmLayer(Tape &tape, Var sequence, BiLstmParams &params);

}  // namespace nn
}  // namespace fieldasr

#endif  // FIELDASR_NN_LSTM_H_
