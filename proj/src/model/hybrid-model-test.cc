// model/hybrid-model-test.cc

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
#include "ctc/ctc.h"
#include "model/hybrid-loss.h"
#include "model/hybrid-model.h"
#include "nn/gradient-check.h"
#include "nn/ops.h"

namespace fieldasr {

static nn::Tensor RandomFeatures(size_t T, size_t F, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  nn::Tensor t = nn::Tensor::Zeros(T, F);
  for (size_t i = 0; i < t.size(); ++i) t[i] = n(rng);
  return t;
}

static ModelConfig Miniature() {
  ModelConfig c;
  c.input_dim = 3;
  c.encoder_layers = 2;
  c.hidden_size = 4;
  c.decoder_hidden = 4;
  c.attention_dim = 4;
  return c;
}

// Spread weights wider than the init range so gradients are not all tiny.
static void Scramble(HybridModel &m, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (nn::Parameter *p : m.Parameters())
    for (size_t i = 0; i < p->value.size(); ++i) p->value[i] = u(rng);
}

TEST_CASE("defaults match the reference training setup") {
  // "3-layer BiLSTM encoder and a single layer decoder", "a hidden size of
  // 320", "an equal weighting between the CTC and attention objectives",
  // "a batch length of 30", "the Adadelta gradient descent algorithm",
  // "trained for 20 epochs".
  ModelConfig m;
  CHECK(m.encoder_layers == 3);
  CHECK(m.hidden_size == 320);
  CHECK(m.decoder_layers == 1);
  CHECK(m.decoder_hidden == 320);
  CHECK(m.ctc_weight == 0.5);
  CHECK(m.frame_stacking == 1);
  TrainConfig t;
  CHECK(t.batch_utterances == 30);
  CHECK(t.epochs == 20);
  CHECK(t.ctc_weight == 0.5);
  CHECK(t.adadelta_rho == 0.95);
  CHECK(t.adadelta_epsilon == 1e-8);
  CHECK(t.clip_norm == 5.0);
  CHECK(t.sort_by_length);
  DecodeOptions d;
  CHECK(d.beam == 5);
  CHECK(d.ctc_weight == 0.5);
}

TEST_CASE("config validation and json round trip") {
  ModelConfig c = Miniature();
  c.ctc_weight = 1.5;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = Miniature();
  c.hidden_size = 0;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = Miniature();
  c.decoder_layers = 2;
  CHECK_THROWS_AS(c.Validate(), Error);
  c = Miniature();
  c.frame_stacking = 3;
  c.ctc_weight = 0.25;
  CHECK(ModelConfigFromJson(ToJson(c)) == c);
  TrainConfig t;
  t.epochs = 7;
  t.seed = 99;
  t.sort_by_length = false;
  CHECK(TrainConfigFromJson(ToJson(t)) == t);
  CHECK(ModelConfigFromJson(nlohmann::json::object()) == ModelConfig());
  CHECK_THROWS_AS(ModelConfigFromJson(nlohmann::json{{"hidden_size", "big"}}), Error);
  TrainConfig bad;
  bad.batch_utterances = 0;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("encoder output shape at the default size") {
  HybridModel m(ModelConfig(), CharInventory(U"abc"));
  m.Initialize(1);
  nn::Tape tape(false);
  HybridModel::Encoded e = m.Encode(tape, RandomFeatures(98, 40, 2));
  CHECK(e.states.value().rows() == 98);
  CHECK(e.states.value().cols() == 640);
  CHECK(e.ctc_log_probs.value().rows() == 98);
  CHECK(e.ctc_log_probs.value().cols() == 6);
  for (size_t t = 0; t < 98; ++t) {
    double s = kLogZero;
    for (size_t k = 0; k < 6; ++k) s = LogAdd(s, e.ctc_log_probs.value()(t, k));
    CHECK(std::fabs(s) <= 1e-10);
  }
}

TEST_CASE("frame stacking pads with zeros") {
  ModelConfig c = Miniature();
  c.frame_stacking = 2;
  HybridModel m(c, CharInventory(U"ab"));
  nn::Tensor f = RandomFeatures(9, 3, 4);
  nn::Tensor s = m.StackFrames(f);
  REQUIRE(s.rows() == 5);
  REQUIRE(s.cols() == 6);
  CHECK(s(0, 0) == f(0, 0));
  CHECK(s(0, 3) == f(1, 0));
  CHECK(s(4, 2) == f(8, 2));
  CHECK(s(4, 3) == 0.0);
  CHECK(s(4, 5) == 0.0);
  m.Initialize(3);
  nn::Tape tape(false);
  CHECK(m.Encode(tape, f).states.value().rows() == 5);
  try {
    m.StackFrames(RandomFeatures(4, 5, 1));
    FAIL("expected shape error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kShape);
  }
}

// Closed form: an LSTM with input n and hidden h holds 4h(n + h + 1).
static size_t ExpectedCount(const ModelConfig &c, size_t V) {
  auto lstm = [](size_t n, size_t h) { return 4 * h * (n + h + 1); };
  size_t H = c.hidden_size, D = c.decoder_hidden, A = c.attention_dim;
  size_t total = 0;
  for (int l = 0; l < c.encoder_layers; ++l)
    total += 2 * lstm(l == 0 ? c.input_dim * c.frame_stacking : 2 * H, H);
  total += 2 * H * V + V;                  // ctc
  total += V * D;                          // embedding
  total += lstm(D + 2 * H, D);             // decoder
  total += 2 * H * A + A + D * A + A;      // attention
  total += (D + 2 * H) * V + V;            // output
  return total;
}

TEST_CASE("parameter count matches closed form") {
  ModelConfig c = Miniature();
  CHECK(HybridModel(c, CharInventory(U"ab")).ParameterCount() == ExpectedCount(c, 5));
  c.frame_stacking = 3;
  c.attention_dim = 7;
  c.decoder_hidden = 6;
  CHECK(HybridModel(c, CharInventory(U"abcdefg")).ParameterCount() == ExpectedCount(c, 10));
  ModelConfig d;
  CHECK(HybridModel(d, CharInventory(U"abcdefghij")).ParameterCount() == ExpectedCount(d, 13));
}

TEST_CASE("initialization is seeded and bounded") {
  HybridModel a(Miniature(), CharInventory(U"ab")), b(Miniature(), CharInventory(U"ab"));
  a.Initialize(5);
  b.Initialize(5);
  auto pa = a.Parameters();
  auto pb = b.Parameters();
  for (size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i]->value.vector() == pb[i]->value.vector());
    // weights ~ N(0, 1/fan_in), embedding N(0, 1); nothing past 6 sd
    double sd = pa[i]->name == "dec.embedding" ? 1.0
                                                : 1.0 / std::sqrt(double(pa[i]->value.rows()));
    for (double v : pa[i]->value.vector()) CHECK(std::fabs(v) <= 6.0 * sd + 1.0);
  }
  b.Initialize(6);
  CHECK(pa[0]->value.vector() != b.Parameters()[0]->value.vector());
}

TEST_CASE("lambda boundaries") {
  HybridModel m(Miniature(), CharInventory(U"ab"));
  m.Initialize(11);
  Scramble(m, 12);
  nn::Tensor f = RandomFeatures(6, 3, 13);
  LabelSequence target = {3, 4, 3};

  nn::Tape t1(false);
  double ctc_only = HybridLoss(t1, m, f, target, 1.0).loss.value().item();
  nn::Tape t2(false);
  double reference_ctc = CtcLoss(m.Encode(t2, f).ctc_log_probs.value(), target).loss;
  CHECK(ctc_only == reference_ctc);

  nn::Tape t3(false);
  double att_only = HybridLoss(t3, m, f, target, 0.0).loss.value().item();
  nn::Tape t4(false);
  HybridModel::Encoded e = m.Encode(t4, f);
  double reference_att =
      AttentionLoss(t4, m, m.PrepareAttention(t4, e.states), target).value().item();
  CHECK(att_only == reference_att);

  nn::Tape t5(false);
  HybridLossResult half = HybridLoss(t5, m, f, target, 0.5);
  CHECK(half.loss.value().item() == doctest::Approx(0.5 * (ctc_only + att_only)).epsilon(1e-14));
  CHECK(half.ctc == ctc_only);
  CHECK(half.att == att_only);
}

TEST_CASE("attention loss is mean cross-entropy over target plus eos") {
  // Independent unrolling of the decoder with softmax done by hand.
  HybridModel m(Miniature(), CharInventory(U"ab"));
  m.Initialize(21);
  Scramble(m, 22);
  nn::Tensor f = RandomFeatures(5, 3, 23);
  LabelSequence target = {4, 3};
  nn::Tape tape(false);
  HybridModel::Encoded e = m.Encode(tape, f);
  HybridModel::AttentionMemory mem = m.PrepareAttention(tape, e.states);
  HybridModel::DecoderState s = m.InitialDecoderState(tape);
  LabelSequence outputs = target;
  outputs.push_back(CharInventory::kEos);
  int prev = CharInventory::kEos;
  double total = 0.0;
  for (int y : outputs) {
    auto [next, logits] = m.DecoderStep(tape, mem, s, prev);
    const nn::Tensor &z = logits.value();
    double mx = z[0];
    for (size_t k = 1; k < z.size(); ++k) mx = std::max(mx, z[k]);
    double denom = 0.0;
    for (size_t k = 0; k < z.size(); ++k) denom += std::exp(z[k] - mx);
    total += -(z[y] - mx - std::log(denom));
    s = next;
    prev = y;
  }
  nn::Tape t2(false);
  CHECK(HybridLoss(t2, m, f, target, 0.0).loss.value().item() ==
        doctest::Approx(total / 3.0).epsilon(1e-12));
}

TEST_CASE("infeasible and empty targets") {
  HybridModel m(Miniature(), CharInventory(U"ab"));
  m.Initialize(1);
  nn::Tensor f = RandomFeatures(3, 3, 1);
  LabelSequence too_long = {3, 3, 3};  // needs 5 frames
  nn::Tape tape;
  try {
    HybridLoss(tape, m, f, too_long, 0.5);
    FAIL("expected infeasible");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kInfeasible);
  }
  nn::Tape t2;
  CHECK_THROWS_AS(HybridLoss(t2, m, f, LabelSequence{}, 0.5), Error);
  // Attention alone has no frame requirement.
  nn::Tape t3;
  CHECK(std::isfinite(HybridLoss(t3, m, f, too_long, 0.0).loss.value().item()));
}

TEST_CASE("hybrid loss gradients, miniature config H=4 V=5 T=6") {
  HybridModel m(Miniature(), CharInventory(U"ab"));
  m.Initialize(31);
  Scramble(m, 32);
  nn::Tensor f = RandomFeatures(6, 3, 33);
  LabelSequence target = {3, 4, 4};
  std::vector<nn::Parameter *> params = m.Parameters();
  // Some attention weights see gradients near 1e-7; h=1e-4 keeps central
  // differences above roundoff (~eps |L| / h) there.
  for (double lambda : {0.0, 0.5, 1.0}) {
    CAPTURE(lambda);
    nn::GradCheckResult r = nn::CheckParameterGradients(
        [&](nn::Tape &tape) { return HybridLoss(tape, m, f, target, lambda).loss; }, params,
        1e-4);
    INFO("worst: " << r.worst);
    CHECK(r.checked == m.ParameterCount());
    CHECK(r.max_rel_error < 1e-5);
  }
}

TEST_CASE("attention decoder step gradients") {
  HybridModel m(Miniature(), CharInventory(U"ab"));
  m.Initialize(41);
  Scramble(m, 42);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1, 1);
  nn::Tensor states = nn::Tensor::Zeros(6, 8);
  for (size_t i = 0; i < states.size(); ++i) states[i] = u(rng);
  nn::Tensor w = nn::Tensor::Zeros(1, 5);
  for (size_t i = 0; i < w.size(); ++i) w[i] = u(rng);
  auto loss = [&](nn::Tape &tape, nn::Var enc) {
    HybridModel::AttentionMemory mem = m.PrepareAttention(tape, enc);
    HybridModel::DecoderState s = m.InitialDecoderState(tape);
    auto [s1, l1] = m.DecoderStep(tape, mem, s, CharInventory::kEos);
    auto [s2, l2] = m.DecoderStep(tape, mem, s1, 3);
    nn::Var wv = tape.Constant(w);
    return nn::Add(nn::Sum(nn::Mul(l1, wv)), nn::Sum(nn::Mul(nn::Tanh(l2), wv)));
  };
  std::vector<nn::Parameter *> params = m.Parameters();
  nn::GradCheckResult rp = nn::CheckParameterGradients(
      [&](nn::Tape &tape) { return loss(tape, tape.Constant(states)); }, params);
  INFO("worst param: " << rp.worst);
  CHECK(rp.max_rel_error < 1e-5);
  nn::GradCheckResult ri = nn::CheckInputGradients(
      [&](nn::Tape &tape, std::span<const nn::Var> v) { return loss(tape, v[0]); }, {states});
  INFO("worst input: " << ri.worst);
  CHECK(ri.max_rel_error < 1e-5);
}

}  // namespace fieldasr
