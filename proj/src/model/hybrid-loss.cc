// model/hybrid-loss.cc

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

#include "model/hybrid-loss.h"

#include <vector>

#include "base/error.h"
#include "ctc/ctc.h"
#include "nn/ops.h"

namespace fieldasr {

using nn::Tensor;
using nn::Var;

Var CtcLossOp(Var log_probs, std::span<const int> target) {
  CtcResult r = CtcLoss(log_probs.value(), target);
  int in = log_probs.id();
  auto grad = std::make_shared<Tensor>(std::move(r.grad));
  return log_probs.tape()->Record("ctc_loss", Tensor::Scalar(r.loss), {log_probs},
                                  [in, grad](nn::Tape &t, int self) {
                                    t.GradBuffer(in).AddScaled(*grad, t.OutGrad(self)[0]);
                                  });
}

Var AttentionLoss(nn::Tape &tape, HybridModel &model,
                  const HybridModel::AttentionMemory &memory, std::span<const int> target) {
  std::vector<int> outputs(target.begin(), target.end());
  outputs.push_back(CharInventory::kEos);
  std::vector<Var> logits;
  HybridModel::DecoderState state = model.InitialDecoderState(tape);
  int prev = CharInventory::kEos;
  for (int y : outputs) {
    auto [next, step_logits] = model.DecoderStep(tape, memory, state, prev);
    logits.push_back(step_logits);
    state = next;
    prev = y;
  }
  return nn::CrossEntropy(nn::Concat(logits, 0), outputs);
}

HybridLossResult HybridLoss(nn::Tape &tape, HybridModel &model, const Tensor &features,
                            std::span<const int> target, double ctc_weight) {
  if (target.empty()) Fail(ErrorKind::kSize, "hybrid loss needs a non-empty target");
  if (!(ctc_weight >= 0.0 && ctc_weight <= 1.0))
    Fail(ErrorKind::kParameter, "ctc_weight must be in [0, 1], got ", ctc_weight);
  HybridModel::Encoded enc = model.Encode(tape, features);
  HybridLossResult result;
  std::vector<Var> terms;
  if (ctc_weight > 0.0) {
    Var ctc = CtcLossOp(enc.ctc_log_probs, target);
    result.ctc = ctc.value().item();
    terms.push_back(ctc_weight == 1.0 ? ctc : nn::Scale(ctc, ctc_weight));
  }
  if (ctc_weight < 1.0) {
    Var att = AttentionLoss(tape, model, model.PrepareAttention(tape, enc.states), target);
    result.att = att.value().item();
    terms.push_back(ctc_weight == 0.0 ? att : nn::Scale(att, 1.0 - ctc_weight));
  }
  result.loss = terms.size() == 1 ? terms[0] : nn::Add(terms[0], terms[1]);
  return result;
}

}  // namespace fieldasr
