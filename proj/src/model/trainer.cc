// model/trainer.cc

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

#include "model/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "base/error.h"
#include "base/seeded-random.h"
#include "ctc/ctc.h"
#include "eval/cer.h"
#include "model/decode.h"
#include "model/hybrid-loss.h"
#include "nn/adadelta.h"
#include "nn/ops.h"

namespace fieldasr {

Example MakeExample(std::string id, nn::Tensor features, const std::string &text,
                    const CharInventory &vocab) {
  return {std::move(id), std::move(features), vocab.Encode(text), text};
}

namespace {

std::string Format(const char *fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

size_t EncodedFrames(const HybridModel &model, const Example &e) {
  size_t k = model.config().frame_stacking;
  return (e.features.rows() + k - 1) / k;
}

}  // namespace

double MeanLoss(HybridModel &model, std::span<const Example> examples, double ctc_weight) {
  if (examples.empty()) Fail(ErrorKind::kSize, "mean loss over an empty set");
  double total = 0.0;
  for (const Example &e : examples) {
    nn::Tape tape(false);
    total += HybridLoss(tape, model, e.features, e.target, ctc_weight).loss.value().item();
  }
  return total / static_cast<double>(examples.size());
}

std::string GreedyTranscribe(HybridModel &model, const nn::Tensor &features, double ctc_weight) {
  return ctc_weight > 0.0 ? GreedyCtcDecode(model, features).text
                          : GreedyAttentionDecode(model, features).text;
}

double GreedyCer(HybridModel &model, std::span<const Example> examples, double ctc_weight) {
  if (examples.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<TextPair> pairs;
  for (const Example &e : examples)
    pairs.emplace_back(e.text, GreedyTranscribe(model, e.features, ctc_weight));
  return CorpusCer(pairs).cer;
}

std::vector<EpochMetrics> Train(HybridModel &model, std::span<const Example> train_set,
                                std::span<const Example> dev, const TrainConfig &cfg,
                                const LogSink &log) {
  cfg.Validate();
  auto emit = [&](const std::string &line) {
    if (log) log(line);
  };
  const double lambda = cfg.ctc_weight;

  std::vector<const Example *> usable;
  for (const Example &e : train_set) {
    if (e.target.empty()) {
      emit("skip " + e.id + ": empty transcript");
      continue;
    }
    if (e.features.cols() != static_cast<size_t>(model.config().input_dim))
      Fail(ErrorKind::kShape, "example ", e.id, " has ", e.features.cols(),
           " feature columns, model expects ", model.config().input_dim);
    if (lambda > 0.0 && RequiredFrames(e.target) > EncodedFrames(model, e)) {
      emit("skip " + e.id + ": " + std::to_string(e.target.size()) + " labels need " +
           std::to_string(RequiredFrames(e.target)) + " frames, only " +
           std::to_string(EncodedFrames(model, e)) + " available");
      continue;
    }
    usable.push_back(&e);
  }
  if (usable.empty()) Fail(ErrorKind::kSize, "no usable training examples");
  std::vector<const Example *> by_length = usable;
  if (cfg.sort_by_length)
    std::stable_sort(by_length.begin(), by_length.end(), [](const Example *a, const Example *b) {
      return a->features.rows() < b->features.rows();
    });

  nn::Adadelta optimizer({cfg.adadelta_rho, cfg.adadelta_epsilon, cfg.clip_norm});
  std::vector<nn::Parameter *> params = model.Parameters();
  const size_t B = static_cast<size_t>(cfg.batch_utterances);
  const size_t n_batches = (usable.size() + B - 1) / B;
  std::vector<EpochMetrics> history;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const uint64_t epoch_seed = cfg.seed + static_cast<uint64_t>(epoch);
    std::vector<std::vector<const Example *>> batches(n_batches);
    if (cfg.sort_by_length) {
      std::vector<size_t> order = SeededPermutation(n_batches, epoch_seed);
      for (size_t b = 0; b < n_batches; ++b)
        for (size_t i = order[b] * B; i < std::min(usable.size(), (order[b] + 1) * B); ++i)
          batches[b].push_back(by_length[i]);
    } else {
      std::vector<size_t> order = SeededPermutation(usable.size(), epoch_seed);
      for (size_t i = 0; i < usable.size(); ++i) batches[i / B].push_back(usable[order[i]]);
    }

    double loss_sum = 0.0;
    size_t loss_count = 0;
    for (size_t b = 0; b < batches.size(); ++b) {
      for (nn::Parameter *p : params) p->ZeroGrad();
      double batch_loss = 0.0;
      try {
        for (const Example *e : batches[b]) {
          nn::Tape tape;
          HybridLossResult r = HybridLoss(tape, model, e->features, e->target, lambda);
          double v = r.loss.value().item();
          if (!std::isfinite(v)) Fail(ErrorKind::kNumeric, "non-finite loss on ", e->id);
          batch_loss += v;
          tape.Backward(nn::Scale(r.loss, 1.0 / static_cast<double>(batches[b].size())));
        }
        optimizer.Step(params);
      } catch (const Error &err) {
        if (err.kind() != ErrorKind::kNumeric) throw;
        Fail(ErrorKind::kNumeric, "epoch ", epoch, " batch ", b + 1, ": ", err.what());
      }
      loss_sum += batch_loss;
      loss_count += batches[b].size();
      emit("epoch " + std::to_string(epoch) + " batch " + std::to_string(b + 1) + "/" +
           std::to_string(batches.size()) + " loss " +
           Format("%.6f", batch_loss / static_cast<double>(batches[b].size())));
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(loss_count);
    {
      std::vector<TextPair> pairs;
      for (const Example *e : usable)
        pairs.emplace_back(e->text, GreedyTranscribe(model, e->features, lambda));
      m.train_cer = CorpusCer(pairs).cer;
    }
    m.dev_cer = GreedyCer(model, dev, lambda);
    history.push_back(m);
    emit("epoch " + std::to_string(epoch) + " train_loss " + Format("%.6f", m.train_loss) +
         " train_cer " + Format("%.6f", m.train_cer) + " dev_cer " + Format("%.6f", m.dev_cer));
  }
  return history;
}

}  // namespace fieldasr
