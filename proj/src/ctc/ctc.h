// ctc/ctc.h

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

#ifndef FIELDASR_CTC_CTC_H_
#define FIELDASR_CTC_CTC_H_

#include <limits>
#include <span>
#include <vector>

#include "ctc/char-inventory.h"
#include "nn/tensor.h"

namespace fieldasr {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; kLogZero is the identity.
double LogAdd(double a, double b);

// Removes consecutive duplicates, then blanks.
LabelSequence Collapse(std::span<const int> path, int blank = CharInventory::kBlank);

// Minimum number of frames that can emit `target`: its length plus one
// blank between each pair of equal adjacent labels.
size_t RequiredFrames(std::span<const int> target);

struct CtcResult {
  double loss;       // -log p(target | input)
  nn::Tensor grad;   // d loss / d log_probs, same shape as log_probs
};

// Forward-backward over the blank-interleaved target in log space.
// `log_probs` is T x V, one log-distribution per frame; rows are treated as
// free inputs when differentiating. Throws kInfeasible if T is below
// RequiredFrames(target), kInvalidLabel for blank or out-of-range labels.
CtcResult CtcLoss(const nn::Tensor &log_probs, std::span<const int> target);

// Per-frame argmax (lowest index on ties), then Collapse.
LabelSequence GreedyDecode(const nn::Tensor &log_probs);

// Viterbi alignment: the frame at which each target label is first emitted
// on the single most probable path. Same preconditions as CtcLoss.
std::vector<size_t> CtcAlign(const nn::Tensor &log_probs, std::span<const int> target);

/// Incremental CTC prefix scoring for joint decoding. For a prefix h the
/// score is log of the total probability of paths whose collapsed labeling
/// starts with h; extending by eos gives the probability that the labeling
/// is exactly the prefix.
class CtcPrefixScorer {
 public:
  struct State {
    std::vector<double> r_nonblank;  // per frame: paths ending in the last label
    std::vector<double> r_blank;     // per frame: paths ending in blank
    double score = 0.0;
    int last = -1;  // last label of the prefix, -1 when empty
    bool ended = false;
  };

  explicit CtcPrefixScorer(const nn::Tensor &log_probs,
                           int blank = CharInventory::kBlank,
                           int eos = CharInventory::kEos);

  State Initial() const;
  // Throws kInvalidLabel for blank; extending an ended state is a kState error.
  State Extend(const State &prefix, int next) const;

  size_t frames() const { return frames_; }

 private:
  const nn::Tensor &log_probs_;
  size_t frames_;
  size_t vocab_;
  int blank_;
  int eos_;
};

// Stateless convenience: score of prefix + next, computed from scratch.
double CtcPrefixScore(const nn::Tensor &log_probs, std::span<const int> prefix, int next);

}  // namespace fieldasr

#endif  // FIELDASR_CTC_CTC_H_
