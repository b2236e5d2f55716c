// nn/adadelta-test.cc

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

#include "base/error.h"
#include "nn/adadelta.h"

namespace fieldasr {
namespace nn {

TEST_CASE("zero gradient leaves parameters unchanged and decays accumulators") {
  Parameter p("x", Tensor(Shape{1, 2}, {0.5, -1.5}));
  Parameter* ps[] = {&p};
  Adadelta opt;
  p.grad = Tensor(Shape{1, 2}, {1.0, 1.0});
  opt.Step(ps);
  Tensor after_first = p.value;
  AdadeltaSlot before = *opt.slot("x");
  p.ZeroGrad();
  opt.Step(ps);
  CHECK(p.value.vector() == after_first.vector());
  const AdadeltaSlot *s = opt.slot("x");
  for (size_t i = 0; i < 2; ++i) {
    CHECK(s->accum_grad_sq[i] == doctest::Approx(0.95 * before.accum_grad_sq[i]));
    CHECK(s->accum_update_sq[i] == doctest::Approx(0.95 * before.accum_update_sq[i]));
  }
}

TEST_CASE("first step from fresh state matches hand evaluation") {
  Parameter p("x", Tensor(Shape{1, 1}, {0.0}));
  p.grad = Tensor(Shape{1, 1}, {1.0});
  Parameter* ps[] = {&p};
  Adadelta opt;
  opt.Step(ps);
  // E[g^2] = 0.05, dx = -sqrt(1e-8 / 0.05000001)
  double expected = -std::sqrt(1e-8 / 0.05000001);
  CHECK(p.value[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(p.value[0] == doctest::Approx(-4.4721e-4).epsilon(1e-4));
  const AdadeltaSlot *s = opt.slot("x");
  CHECK(s->accum_grad_sq[0] == doctest::Approx(0.05));
  CHECK(s->accum_update_sq[0] == doctest::Approx(0.05 * expected * expected));
}

TEST_CASE("ten steps on x^2 strictly decrease the objective") {
  Parameter p("x", Tensor(Shape{1, 1}, {1.0}));
  Parameter* ps[] = {&p};
  Adadelta opt;
  double prev = 1.0;
  for (int step = 0; step < 10; ++step) {
    p.grad = Tensor(Shape{1, 1}, {2.0 * p.value[0]});
    opt.Step(ps);
    double f = p.value[0] * p.value[0];
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("global norm clipping rescales the gradient") {
  // With clipping the update depends on the clipped g; compare against a
  // run that feeds the pre-clipped gradient directly with clipping off.
  Parameter a("a", Tensor(Shape{1, 2}, {0.0, 0.0}));
  a.grad = Tensor(Shape{1, 2}, {30.0, 40.0});  // norm 50
  Parameter* pa[] = {&a};
  Adadelta clipped({0.95, 1e-8, 5.0});
  CHECK(clipped.Step(pa) == doctest::Approx(50.0));

  Parameter b("b", Tensor(Shape{1, 2}, {0.0, 0.0}));
  b.grad = Tensor(Shape{1, 2}, {3.0, 4.0});
  Parameter* pb[] = {&b};
  Adadelta unclipped({0.95, 1e-8, 0.0});
  unclipped.Step(pb);
  CHECK(a.value[0] == doctest::Approx(b.value[0]).epsilon(1e-12));
  CHECK(a.value[1] == doctest::Approx(b.value[1]).epsilon(1e-12));
  CHECK(clipped.slot("a")->accum_grad_sq[1] == doctest::Approx(0.05 * 16.0));
}

TEST_CASE("non-finite gradient names the parameter and changes nothing") {
  Parameter good("good", Tensor(Shape{1, 1}, {1.0}));
  Parameter bad("decoder.w", Tensor(Shape{1, 1}, {1.0}));
  good.grad = Tensor(Shape{1, 1}, {1.0});
  bad.grad = Tensor(Shape{1, 1}, {INFINITY});
  Parameter* ps[] = {&good, &bad};
  Adadelta opt;
  try {
    opt.Step(ps);
    FAIL("expected numeric error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kNumeric);
    CHECK(std::string(e.what()).find("decoder.w") != std::string::npos);
  }
  CHECK(good.value[0] == 1.0);
}

}  // namespace nn
}  // namespace fieldasr
