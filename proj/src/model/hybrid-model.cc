// model/hybrid-model.cc

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

#include "model/hybrid-model.h"

#include <cmath>
#include <random>
#include <string>

#include "base/error.h"
#include "base/seeded-random.h"
#include "nn/ops.h"

namespace fieldasr {

using nn::Parameter;
using nn::Tensor;
using nn::Var;

namespace {

Parameter Zeros(const std::string &name, size_t rows, size_t cols) {
  return Parameter(name, Tensor::Zeros(rows, cols));
}

bool IsBias(const std::string &name) {
  return name.ends_with(".bias") || name.ends_with(".b");
}

}  // namespace

HybridModel::HybridModel(const ModelConfig &config, CharInventory vocab)
    : config_(config), vocab_(std::move(vocab)) {
  config_.Validate();
  feature_config.n_mels = config_.input_dim;
  const size_t H = config_.hidden_size, V = vocab_.size();
  const size_t D = config_.decoder_hidden, A = config_.attention_dim;
  size_t in = static_cast<size_t>(config_.input_dim) * config_.frame_stacking;
  for (int l = 0; l < config_.encoder_layers; ++l) {
    encoder_.push_back(nn::MakeBiLstmParams("enc." + std::to_string(l), in, H));
    in = 2 * H;
  }
  ctc_w_ = Zeros("ctc.w", 2 * H, V);
  ctc_b_ = Zeros("ctc.b", 1, V);
  embedding_ = Zeros("dec.embedding", V, D);
  decoder_ = nn::MakeLstmParams("dec.lstm", D + 2 * H, D);
  att_w_enc_ = Zeros("att.w_enc", 2 * H, A);
  att_b_ = Zeros("att.b", 1, A);
  att_w_dec_ = Zeros("att.w_dec", D, A);
  att_v_ = Zeros("att.v", A, 1);
  out_w_ = Zeros("out.w", D + 2 * H, V);
  out_b_ = Zeros("out.b", 1, V);
}

std::vector<Parameter *> HybridModel::Parameters() {
  std::vector<Parameter *> ps;
  for (nn::BiLstmParams &layer : encoder_) layer.Collect(&ps);
  for (Parameter *p : {&ctc_w_, &ctc_b_, &embedding_}) ps.push_back(p);
  decoder_.Collect(&ps);
  for (Parameter *p : {&att_w_enc_, &att_b_, &att_w_dec_, &att_v_, &out_w_, &out_b_})
    ps.push_back(p);
  return ps;
}

std::vector<const Parameter *> HybridModel::Parameters() const {
  std::vector<Parameter *> ps = const_cast<HybridModel *>(this)->Parameters();
  return {ps.begin(), ps.end()};
}

size_t HybridModel::ParameterCount() const {
  size_t n = 0;
  for (const Parameter *p : Parameters()) n += p->value.size();
  return n;
}

void HybridModel::Initialize(uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (Parameter *p : Parameters()) {
    if (IsBias(p->name)) {
      p->value.Fill(0.0);
      if (p->name.find("lstm") != std::string::npos || p->name.starts_with("enc.")) {
        size_t hidden = p->value.cols() / 4;
        for (size_t k = hidden; k < 2 * hidden; ++k) p->value[k] = 1.0;
      }
      continue;
    }
    // LeCun normal: weights are [fan_in, fan_out]; embeddings N(0, 1).
    double sd = p->name == "dec.embedding" ? 1.0 : 1.0 / std::sqrt(double(p->value.rows()));
    for (double &w : p->value.values()) w = sd * StandardNormal(rng);
  }
}

Tensor HybridModel::StackFrames(const Tensor &features) const {
  const size_t F = config_.input_dim, k = config_.frame_stacking;
  if (features.rank() != 2 || features.cols() != F)
    Fail(ErrorKind::kShape, "feature dim mismatch: model expects ", F, " columns, got ",
         nn::ShapeToString(features.shape()));
  if (k == 1) return features;
  const size_t T = features.rows(), Tp = (T + k - 1) / k;
  Tensor out = Tensor::Zeros(Tp, F * k);
  for (size_t t = 0; t < T; ++t)
    for (size_t f = 0; f < F; ++f) out(t / k, (t % k) * F + f) = features(t, f);
  return out;
}

HybridModel::Encoded HybridModel::Encode(nn::Tape &tape, const Tensor &features) {
  Tensor stacked = StackFrames(features);
  if (stacked.rows() == 0) Fail(ErrorKind::kShape, "cannot encode an empty feature matrix");
  Var x = tape.Constant(std::move(stacked));
  for (nn::BiLstmParams &layer : encoder_) x = nn::BiLstmLayer(tape, x, layer);
  Var logits = nn::Add(nn::MatMul(x, tape.Param(ctc_w_)), tape.Param(ctc_b_));
  return {x, nn::LogSoftmax(logits, 1)};
}

HybridModel::AttentionMemory HybridModel::PrepareAttention(nn::Tape &tape, Var states) {
  return {states, nn::Add(nn::MatMul(states, tape.Param(att_w_enc_)), tape.Param(att_b_))};
}

HybridModel::DecoderState HybridModel::InitialDecoderState(nn::Tape &tape) {
  return {nn::ZeroLstmState(tape, config_.decoder_hidden),
          tape.Constant(Tensor::Zeros(1, 2 * static_cast<size_t>(config_.hidden_size)))};
}

std::pair<HybridModel::DecoderState, Var> HybridModel::DecoderStep(
    nn::Tape &tape, const AttentionMemory &memory, const DecoderState &state, int prev_token) {
  if (prev_token < 0 || prev_token >= vocab_size())
    Fail(ErrorKind::kInvalidLabel, "decoder input token ", prev_token, " out of range");
  const int ids[] = {prev_token};
  Var emb = nn::EmbeddingLookup(tape.Param(embedding_), ids);
  Var input_parts[] = {emb, state.context};
  Var input = nn::Concat(input_parts, 1);
  nn::LstmState lstm = nn::LstmCell(input, state.lstm, tape.Param(decoder_.w_input),
                                    tape.Param(decoder_.w_hidden), tape.Param(decoder_.bias));
  // e_t = v . tanh(W_enc h_t + b + W_dec s)
  Var energy = nn::Tanh(nn::Add(memory.projected, nn::MatMul(lstm.h, tape.Param(att_w_dec_))));
  Var scores = nn::MatMul(energy, tape.Param(att_v_));
  Var weights = nn::Softmax(scores, 0);
  Var context = nn::MatMul(nn::Transpose(weights), memory.states);
  Var out_parts[] = {lstm.h, context};
  Var logits = nn::Add(nn::MatMul(nn::Concat(out_parts, 1), tape.Param(out_w_)),
                       tape.Param(out_b_));
  return {{lstm, context}, logits};
}

}  // namespace fieldasr
