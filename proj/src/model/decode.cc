// model/decode.cc

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

#include "model/decode.h"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "base/error.h"
#include "ctc/ctc.h"
#include "nn/ops.h"

namespace fieldasr {

using nn::Tensor;

namespace {

struct Encoded {
  Tensor states;
  Tensor ctc_log_probs;
  Tensor projected;
};

Encoded EncodeForDecoding(HybridModel &model, const Tensor &features, bool want_attention) {
  nn::Tape tape(false);
  HybridModel::Encoded e = model.Encode(tape, features);
  Encoded out{e.states.value(), e.ctc_log_probs.value(), Tensor()};
  if (want_attention) out.projected = model.PrepareAttention(tape, e.states).projected.value();
  return out;
}

// Decoder state kept outside any tape, so each step can use a short-lived
// tape and memory stays bounded during long searches.
struct DecoderTensors {
  Tensor h, c, context;
};

DecoderTensors InitialTensors(HybridModel &model) {
  nn::Tape tape(false);
  HybridModel::DecoderState s = model.InitialDecoderState(tape);
  return {s.lstm.h.value(), s.lstm.c.value(), s.context.value()};
}

class StepRunner {
 public:
  StepRunner(HybridModel &model, const Encoded &enc) : model_(model), enc_(enc) {}

  // Starts a new tape for one decoding step (shared by all hypotheses).
  void BeginStep() {
    tape_ = std::make_unique<nn::Tape>(false);
    memory_ = {tape_->Constant(enc_.states), tape_->Constant(enc_.projected)};
  }

  // Returns the next state and log-probabilities over the vocabulary.
  std::pair<DecoderTensors, Tensor> Run(const DecoderTensors &s, int prev) {
    HybridModel::DecoderState state{{tape_->Constant(s.h), tape_->Constant(s.c)},
                                    tape_->Constant(s.context)};
    auto [next, logits] = model_.DecoderStep(*tape_, memory_, state, prev);
    Tensor logp = logits.value();
    nn::LogSoftmaxRowsInPlace(&logp);
    return {{next.lstm.h.value(), next.lstm.c.value(), next.context.value()}, logp};
  }

 private:
  HybridModel &model_;
  const Encoded &enc_;
  std::unique_ptr<nn::Tape> tape_;
  HybridModel::AttentionMemory memory_;
};

int MaxLen(const DecodeOptions &opt, const Encoded &enc) {
  if (opt.max_len < 0) Fail(ErrorKind::kParameter, "max_len must be >= 0");
  return opt.max_len > 0 ? opt.max_len : static_cast<int>(enc.states.rows());
}

}  // namespace

Hypothesis GreedyCtcDecode(HybridModel &model, const Tensor &features) {
  Encoded enc = EncodeForDecoding(model, features, false);
  Hypothesis h;
  h.ids = GreedyDecode(enc.ctc_log_probs);
  h.text = model.vocab().Decode(h.ids);
  for (size_t t = 0; t < enc.ctc_log_probs.rows(); ++t) {
    double best = enc.ctc_log_probs(t, 0);
    for (size_t v = 1; v < enc.ctc_log_probs.cols(); ++v)
      best = std::max(best, enc.ctc_log_probs(t, v));
    h.score += best;
  }
  return h;
}

Hypothesis GreedyAttentionDecode(HybridModel &model, const Tensor &features, int max_len) {
  Encoded enc = EncodeForDecoding(model, features, true);
  DecodeOptions opt;
  opt.max_len = max_len;
  const int limit = MaxLen(opt, enc);
  StepRunner runner(model, enc);
  DecoderTensors state = InitialTensors(model);
  Hypothesis h;
  int prev = CharInventory::kEos;
  while (true) {
    runner.BeginStep();
    auto [next, logp] = runner.Run(state, prev);
    int best = CharInventory::kEos;
    if (static_cast<int>(h.ids.size()) < limit) {
      best = 1;
      for (int v = 2; v < model.vocab_size(); ++v)
        if (logp[v] > logp[best]) best = v;
    }
    h.score += logp[best];
    if (best == CharInventory::kEos) break;
    h.ids.push_back(best);
    state = std::move(next);
    prev = best;
  }
  h.text = model.vocab().Decode(h.ids);
  return h;
}

Hypothesis DecodeJoint(HybridModel &model, const Tensor &features, const DecodeOptions &opt) {
  if (opt.beam < 1) Fail(ErrorKind::kParameter, "beam must be >= 1, got ", opt.beam);
  if (!(opt.ctc_weight >= 0.0 && opt.ctc_weight <= 1.0))
    Fail(ErrorKind::kParameter, "ctc_weight must be in [0, 1], got ", opt.ctc_weight);
  const double lambda = opt.ctc_weight;
  const bool use_ctc = lambda > 0.0, use_att = lambda < 1.0;
  Encoded enc = EncodeForDecoding(model, features, use_att);
  const int limit = MaxLen(opt, enc);
  const int V = model.vocab_size();

  CtcPrefixScorer scorer(enc.ctc_log_probs);
  StepRunner runner(model, enc);

  struct Running {
    LabelSequence ids;
    double score;
    DecoderTensors dec;
    CtcPrefixScorer::State ctc;
  };
  std::vector<Running> running;
  running.push_back({{}, 0.0, use_att ? InitialTensors(model) : DecoderTensors(),
                     use_ctc ? scorer.Initial() : CtcPrefixScorer::State()});
  std::vector<Hypothesis> finished;

  while (!running.empty()) {
    if (use_att) runner.BeginStep();
    struct Candidate {
      double score;
      size_t hyp;
      int token;
    };
    std::vector<Candidate> cands;
    std::vector<DecoderTensors> next_dec(running.size());
    std::vector<std::vector<CtcPrefixScorer::State>> next_ctc(running.size());
    for (size_t r = 0; r < running.size(); ++r) {
      const Running &h = running[r];
      Tensor logp;
      if (use_att) {
        int prev = h.ids.empty() ? CharInventory::kEos : h.ids.back();
        std::tie(next_dec[r], logp) = runner.Run(h.dec, prev);
      }
      const bool must_end = static_cast<int>(h.ids.size()) >= limit;
      if (use_ctc) next_ctc[r].resize(V);
      for (int c = 1; c < V; ++c) {
        if (must_end && c != CharInventory::kEos) continue;
        double s = h.score;
        if (use_ctc) {
          next_ctc[r][c] = scorer.Extend(h.ctc, c);
          // Prefixes CTC cannot align (too long for T') are dropped.
          if (next_ctc[r][c].score == kLogZero) continue;
          s += lambda * (next_ctc[r][c].score - h.ctc.score);
        }
        if (use_att) s += (1.0 - lambda) * logp[c];
        cands.push_back({s, r, c});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.hyp != b.hyp) return a.hyp < b.hyp;
      return a.token < b.token;
    });
    if (cands.size() > static_cast<size_t>(opt.beam)) cands.resize(opt.beam);

    std::vector<Running> next;
    for (const Candidate &c : cands) {
      const Running &h = running[c.hyp];
      if (c.token == CharInventory::kEos) {
        finished.push_back({h.ids, model.vocab().Decode(h.ids), c.score});
        continue;
      }
      Running n{h.ids, c.score, use_att ? next_dec[c.hyp] : DecoderTensors(),
                use_ctc ? next_ctc[c.hyp][c.token] : CtcPrefixScorer::State()};
      n.ids.push_back(c.token);
      next.push_back(std::move(n));
    }
    running = std::move(next);
    // Every increment is <= 0, so running hypotheses can only get worse.
    if (!finished.empty() && !running.empty()) {
      double best_finished = finished[0].score;
      for (const Hypothesis &f : finished) best_finished = std::max(best_finished, f.score);
      if (running.front().score <= best_finished) break;
    }
  }

  if (finished.empty()) Fail(ErrorKind::kInfeasible, "no hypothesis reached eos");
  const Hypothesis *best = &finished.front();
  for (const Hypothesis &f : finished)
    if (f.score > best->score) best = &f;
  return *best;
}

}  // namespace fieldasr
