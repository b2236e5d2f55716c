// nn/lstm-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "base/error.h"
#include "nn/gradient-check.h"
#include "nn/lstm.h"
#include "nn/ops.h"

namespace fieldasr {
namespace nn {

static void Randomize(Parameter &p, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (size_t i = 0; i < p.value.size(); ++i) p.value[i] = u(rng);
}

TEST_CASE("zero weights and biases give zero state") {
  LstmParams p = MakeLstmParams("l", 3, 4);
  Tape tape(false);
  std::mt19937_64 rng(1);
  Tensor x(Shape{1, 3}, {0.3, -2.0, 5.0});
  LstmState prev{tape.Constant(Tensor(Shape{1, 4}, 0.7)), tape.Constant(Tensor::Zeros(1, 4))};
  LstmState next = LstmCell(tape.Constant(x), prev, tape.Param(p.w_input),
                            tape.Param(p.w_hidden), tape.Param(p.bias));
  for (double v : next.h.value().values()) CHECK(v == 0.0);
  for (double v : next.c.value().values()) CHECK(v == 0.0);
}

TEST_CASE("cell matches the gate equations evaluated by hand") {
  // H = 1, in = 1 so every gate is a scalar.
  LstmParams p = MakeLstmParams("l", 1, 1);
  p.w_input.value = Tensor(Shape{1, 4}, {0.5, -0.25, 1.0, 0.75});
  p.w_hidden.value = Tensor(Shape{1, 4}, {0.1, 0.2, -0.3, 0.4});
  p.bias.value = Tensor(Shape{1, 4}, {0.0, 1.0, 0.0, -0.5});
  double x = 0.8, h = -0.6, c = 0.3;
  Tape tape(false);
  LstmState next = LstmCell(tape.Constant(Tensor(Shape{1, 1}, {x})),
                            {tape.Constant(Tensor(Shape{1, 1}, {h})),
                             tape.Constant(Tensor(Shape{1, 1}, {c}))},
                            tape.Param(p.w_input), tape.Param(p.w_hidden), tape.Param(p.bias));
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  double i = sig(0.5 * x + 0.1 * h), f = sig(-0.25 * x + 0.2 * h + 1.0);
  double g = std::tanh(1.0 * x - 0.3 * h), o = sig(0.75 * x + 0.4 * h - 0.5);
  double c2 = f * c + i * g, h2 = o * std::tanh(c2);
  CHECK(next.c.value().item() == doctest::Approx(c2).epsilon(1e-14));
  CHECK(next.h.value().item() == doctest::Approx(h2).epsilon(1e-14));
}

TEST_CASE("bilstm output is T x 2H") {
  BiLstmParams p = MakeBiLstmParams("enc", 5, 3);
  Tape tape(false);
  Var y = BiLstmLayer(tape, tape.Constant(Tensor::Zeros(7, 5)), p);
  CHECK(y.value().rows() == 7);
  CHECK(y.value().cols() == 6);
  CHECK_THROWS_AS(BiLstmLayer(tape, tape.Constant(Tensor::Zeros(7, 4)), p), Error);
}

TEST_CASE("backward direction reads the sequence in reverse") {
  std::mt19937_64 rng(2);
  BiLstmParams p = MakeBiLstmParams("enc", 2, 3);
  Randomize(p.forward.w_input, rng);
  Randomize(p.forward.w_hidden, rng);
  p.backward = p.forward;
  Tensor seq(Shape{4, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
  Tensor rev(Shape{4, 2}, {7, 8, 5, 6, 3, 4, 1, 2});
  Tape tape(false);
  Tensor y = BiLstmLayer(tape, tape.Constant(seq), p).value();
  Tensor yr = BiLstmLayer(tape, tape.Constant(rev), p).value();
  // Forward half on the reversed input equals the backward half on the
  // original input, frame-reversed.
  for (size_t t = 0; t < 4; ++t)
    for (size_t k = 0; k < 3; ++k) CHECK(yr(3 - t, k) == doctest::Approx(y(t, 3 + k)));
}

TEST_CASE("2-frame bilstm gradients match finite differences") {
  std::mt19937_64 rng(3);
  BiLstmParams p = MakeBiLstmParams("enc", 3, 2);
  std::vector<Parameter *> params;
  p.Collect(&params);
  for (Parameter *q : params) Randomize(*q, rng);
  std::uniform_real_distribution<double> u(-1, 1);
  Tensor seq(Shape{2, 3});
  for (size_t i = 0; i < seq.size(); ++i) seq[i] = u(rng);
  Tensor w(Shape{2, 4});
  for (size_t i = 0; i < w.size(); ++i) w[i] = u(rng);

  auto loss = [&](Tape &tape, Var input) {
    return Sum(Mul(BiLstmLayer(tape, input, p), tape.Constant(w)));
  };
  GradCheckResult rp = CheckParameterGradients(
      [&](Tape &tape) { return loss(tape, tape.Constant(seq)); }, params);
  INFO("worst param: " << rp.worst);
  CHECK(rp.max_rel_error < 1e-5);
  GradCheckResult ri = CheckInputGradients(
      [&](Tape &tape, std::span<const Var> v) { return loss(tape, v[0]); }, {seq});
  INFO("worst input: " << ri.worst);
  CHECK(ri.max_rel_error < 1e-5);
}

}  // namespace nn
}  // namespace fieldasr
