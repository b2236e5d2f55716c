// model/hybrid-loss.h

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

#ifndef FIELDASR_MODEL_HYBRID_LOSS_H_
#define FIELDASR_MODEL_HYBRID_LOSS_H_

#include <span>

#include "ctc/char-inventory.h"
#include "model/hybrid-model.h"
#include "nn/autodiff.h"

namespace fieldasr {

// CTC negative log-likelihood as a tape op on [T, V] log-probabilities.
nn::Var CtcLossOp(nn::Var log_probs, std::span<const int> target);

// Teacher-forced attention cross-entropy over target + eos, mean per output
// token.
nn::Var AttentionLoss(nn::Tape &tape, HybridModel &model,
                      const HybridModel::AttentionMemory &memory, std::span<const int> target);

struct HybridLossResult {
  nn::Var loss;       // lambda * ctc + (1 - lambda) * att
  double ctc = 0.0;   // 0 when lambda == 0 (branch skipped)
  double att = 0.0;   // 0 when lambda == 1 (branch skipped)
};

// A branch whose weight is zero is not evaluated at all. Throws
// kInfeasible (propagated from CTC) and kSize for an empty target.
HybridLossResult HybridLoss(nn::Tape &tape, HybridModel &model, const nn::Tensor &features,
                            std::span<const int> target, double ctc_weight);

}  // namespace fieldasr

#endif  // FIELDASR_MODEL_HYBRID_LOSS_H_
