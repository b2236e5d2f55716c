// model/decode.h

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

#ifndef FIELDASR_MODEL_DECODE_H_
#define FIELDASR_MODEL_DECODE_H_

#include <string>

#include "ctc/char-inventory.h"
#include "model/hybrid-model.h"

namespace fieldasr {

struct Hypothesis {
  LabelSequence ids;  // without eos
  std::string text;
  double score = 0.0;
};

// CTC head only: per-frame argmax, collapsed.
Hypothesis GreedyCtcDecode(HybridModel &model, const nn::Tensor &features);

// Attention head only: argmax (lowest id on ties, blank excluded) until eos
// or max_len tokens. Score is the summed log-probability including eos.
Hypothesis GreedyAttentionDecode(HybridModel &model, const nn::Tensor &features,
                                 int max_len = 0);

// Joint beam search. Each token adds
//   lambda * (CTC prefix score increment) + (1 - lambda) * attention log-prob.
// Candidates are all non-blank tokens; once a hypothesis has max_len tokens
// only eos may follow. Equal scores are ordered by hypothesis rank, then
// token id. Stops when no running hypothesis can beat the best finished one.
Hypothesis DecodeJoint(HybridModel &model, const nn::Tensor &features,
                       const DecodeOptions &options = DecodeOptions());

}  // namespace fieldasr

#endif  // FIELDASR_MODEL_DECODE_H_
