// nn/ops-test.cc

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
#include "nn/ops.h"

namespace fieldasr {
namespace nn {

static Tensor RandomTensor(Shape shape, std::mt19937_64 &rng, double lo = -1.0,
                           double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(shape);
  for (size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

// Contracts an op's output with a fixed random weight so every output
// element contributes a distinct amount to the scalar.
static Var Contract(Var y, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Var w = y.tape()->Constant(RandomTensor(y.shape(), rng));
  return Sum(Mul(y, w));
}

static void ExpectGradOk(const InputLossFn &fn, std::vector<Tensor> inputs,
                         double tol = 1e-6) {
  GradCheckResult r = CheckInputGradients(fn, std::move(inputs));
  INFO("worst: " << r.worst);
  CHECK(r.checked > 0);
  CHECK(r.max_rel_error < tol);
}

TEST_CASE("softmax rows sum to one, including extreme inputs") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    double scale = trial < 25 ? 5.0 : 700.0;
    Tape tape(false);
    Var x = tape.Constant(RandomTensor({3, 7}, rng, -scale, scale));
    Var y = Softmax(x, 1);
    for (size_t r = 0; r < 3; ++r) {
      double s = 0;
      for (size_t c = 0; c < 7; ++c) s += y.value()(r, c);
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
    Var ly = LogSoftmax(x, 1);
    CHECK(ly.value().AllFinite());
  }
}

TEST_CASE("matmul with identity is identity") {
  std::mt19937_64 rng(2);
  Tape tape(false);
  Tensor a = RandomTensor({3, 4}, rng);
  Tensor eye = Tensor::Zeros(4, 4);
  for (size_t i = 0; i < 4; ++i) eye(i, i) = 1.0;
  Var y = MatMul(tape.Constant(a), tape.Constant(eye));
  CHECK(y.value().vector() == a.vector());
}

TEST_CASE("shape mismatch names the op and both shapes") {
  Tape tape;
  Var a = tape.Constant(Tensor::Zeros(3, 4));
  Var b = tape.Constant(Tensor::Zeros(3, 4));
  try {
    MatMul(a, b);
    FAIL("expected shape error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kShape);
    std::string msg = e.what();
    CHECK(msg.find("matmul") != std::string::npos);
    CHECK(msg.find("[3,4]") != std::string::npos);
  }
  CHECK_THROWS_AS(Mul(a, tape.Constant(Tensor::Zeros(4, 3))), Error);
  CHECK_THROWS_AS(Add(a, tape.Constant(Tensor::Zeros(1, 3))), Error);
}

TEST_CASE("non-finite values are surfaced") {
  Tape tape;
  Tensor bad = Tensor::Zeros(1, 2);
  bad[0] = NAN;
  try {
    Add(tape.Constant(bad), tape.Constant(Tensor::Zeros(1, 2)));
    FAIL("expected numeric error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
  }
}

TEST_CASE("every elementary op passes the finite-difference check") {
  std::mt19937_64 rng(3);
  auto r34 = [&] { return RandomTensor({3, 4}, rng); };

  SUBCASE("matmul") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(MatMul(v[0], v[1]), 1); },
                 {r34(), RandomTensor({4, 3}, rng)});
  }
  SUBCASE("add and broadcast add") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Add(v[0], v[1]), 2); },
                 {r34(), r34()});
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Add(v[0], v[1]), 3); },
                 {r34(), RandomTensor({1, 4}, rng)});
  }
  SUBCASE("sub") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Sub(v[0], v[1]), 4); },
                 {r34(), r34()});
  }
  SUBCASE("mul") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Mul(v[0], v[1]), 5); },
                 {r34(), r34()});
  }
  SUBCASE("scale") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Scale(v[0], -2.5), 6); },
                 {r34()});
  }
  SUBCASE("tanh and sigmoid") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Tanh(v[0]), 7); },
                 {r34()});
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Sigmoid(v[0]), 8); },
                 {r34()});
  }
  SUBCASE("softmax on both axes") {
    for (int axis : {0, 1})
      ExpectGradOk(
          [axis](Tape &, std::span<const Var> v) { return Contract(Softmax(v[0], axis), 9); },
          {r34()});
  }
  SUBCASE("log_softmax on both axes") {
    for (int axis : {0, 1})
      ExpectGradOk([axis](Tape &, std::span<const Var> v) {
        return Contract(LogSoftmax(v[0], axis), 10);
      }, {r34()});
  }
  SUBCASE("concat on both axes") {
    ExpectGradOk([](Tape &, std::span<const Var> v) {
      Var parts[] = {v[0], v[1]};
      return Contract(Concat(parts, 0), 11);
    }, {r34(), RandomTensor({2, 4}, rng)});
    ExpectGradOk([](Tape &, std::span<const Var> v) {
      Var parts[] = {v[0], v[1]};
      return Contract(Concat(parts, 1), 12);
    }, {r34(), RandomTensor({3, 2}, rng)});
  }
  SUBCASE("slice on both axes") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Slice(v[0], 0, 1, 3), 13); },
                 {r34()});
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Slice(v[0], 1, 1, 4), 14); },
                 {r34()});
  }
  SUBCASE("transpose") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Contract(Transpose(v[0]), 15); },
                 {r34()});
  }
  SUBCASE("embedding lookup with repeated ids") {
    ExpectGradOk([](Tape &, std::span<const Var> v) {
      int ids[] = {2, 0, 2, 1};
      return Contract(EmbeddingLookup(v[0], ids), 16);
    }, {r34()});
  }
  SUBCASE("cross entropy with ignored rows") {
    ExpectGradOk([](Tape &, std::span<const Var> v) {
      int targets[] = {1, -1, 3};
      return CrossEntropy(v[0], targets, -1);
    }, {r34()});
  }
  SUBCASE("sum") {
    ExpectGradOk([](Tape &, std::span<const Var> v) { return Scale(Sum(v[0]), 3.0); }, {r34()});
  }
}

TEST_CASE("cross entropy matches the direct formula") {
  Tape tape(false);
  Tensor logits(Shape{2, 3}, {1.0, 2.0, 3.0, 0.0, 0.0, 0.0});
  int targets[] = {2, 0};
  double expected = 0.5 * (-(3.0 - std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0))) +
                           std::log(3.0));
  CHECK(CrossEntropy(tape.Constant(logits), targets).value().item() ==
        doctest::Approx(expected).epsilon(1e-14));
  int all_ignored[] = {-1, -1};
  CHECK(CrossEntropy(tape.Constant(logits), all_ignored).value().item() == 0.0);
  int bad[] = {3, 0};
  CHECK_THROWS_AS(CrossEntropy(tape.Constant(logits), bad), Error);
}

TEST_CASE("backward: sum gives ones, dot gives 2x") {
  std::mt19937_64 rng(4);
  Tensor x0 = RandomTensor({3, 4}, rng);
  {
    Tape tape;
    Var x = tape.Input(x0);
    tape.Backward(Sum(x));
    Tensor g = tape.Grad(x);
    for (double v : g.values()) CHECK(v == 1.0);
  }
  {
    Tape tape;
    Var x = tape.Input(x0);
    tape.Backward(Sum(Mul(x, x)));
    Tensor g = tape.Grad(x);
    for (size_t i = 0; i < g.size(); ++i) CHECK(g[i] == 2.0 * x0[i]);
  }
}

TEST_CASE("backward contract errors") {
  Tape tape;
  Var x = tape.Input(Tensor::Zeros(2, 2));
  try {
    tape.Backward(Tanh(x));
    FAIL("expected shape error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kShape);
  }
  Var loss = Sum(x);
  tape.Backward(loss);
  try {
    tape.Backward(loss);
    FAIL("expected state error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kState);
  }
}

TEST_CASE("gradients of a random 3-layer tanh network match finite differences") {
  std::mt19937_64 rng(5);
  std::vector<Tensor> inputs = {RandomTensor({2, 4}, rng), RandomTensor({4, 5}, rng),
                                RandomTensor({1, 5}, rng), RandomTensor({5, 5}, rng),
                                RandomTensor({1, 5}, rng), RandomTensor({5, 3}, rng),
                                RandomTensor({1, 3}, rng)};
  ExpectGradOk([](Tape &, std::span<const Var> v) {
    Var h = Tanh(Add(MatMul(v[0], v[1]), v[2]));
    h = Tanh(Add(MatMul(h, v[3]), v[4]));
    h = Tanh(Add(MatMul(h, v[5]), v[6]));
    return Contract(h, 17);
  }, inputs);
}

TEST_CASE("forward passes are deterministic") {
  std::mt19937_64 rng(6);
  Tensor a = RandomTensor({5, 6}, rng), b = RandomTensor({6, 4}, rng);
  auto run = [&] {
    Tape tape(false);
    return LogSoftmax(Tanh(MatMul(tape.Constant(a), tape.Constant(b))), 1).value().vector();
  };
  CHECK(run() == run());
}

}  // namespace nn
}  // namespace fieldasr
