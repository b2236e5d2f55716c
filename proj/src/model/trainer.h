// model/trainer.h

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

#ifndef FIELDASR_MODEL_TRAINER_H_
#define FIELDASR_MODEL_TRAINER_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ctc/char-inventory.h"
#include "model/hybrid-model.h"
#include "model/model-config.h"

namespace fieldasr {

struct Example {
  std::string id;
  nn::Tensor features;  // already normalized, T x input_dim
  LabelSequence target;
  std::string text;     // reference for CER
};

Example MakeExample(std::string id, nn::Tensor features, const std::string &text,
                    const CharInventory &vocab);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;  // mean per-utterance hybrid loss over the epoch
  double train_cer = 0.0;
  double dev_cer = 0.0;     // NaN without a dev set
};

using LogSink = std::function<void(const std::string &line)>;

// Mean hybrid loss over the examples, no gradients.
double MeanLoss(HybridModel &model, std::span<const Example> examples, double ctc_weight);

// Greedy transcription used for the per-epoch CER: the CTC head when it has
// weight, the attention head otherwise.
std::string GreedyTranscribe(HybridModel &model, const nn::Tensor &features, double ctc_weight);

// Corpus CER in [0, inf) of greedy transcriptions; NaN for an empty set.
double GreedyCer(HybridModel &model, std::span<const Example> examples, double ctc_weight);

// Adadelta training. Batches are per-utterance tapes whose gradients are
// averaged. With sort_by_length, examples are sorted by frame count and cut
// into batches, and the batch order is shuffled per epoch (seed + epoch);
// otherwise examples are shuffled before batching. Examples the CTC branch
// cannot align are skipped with a log line. The model is not re-initialized.
std::vector<EpochMetrics> Train(HybridModel &model, std::span<const Example> train,
                                std::span<const Example> dev, const TrainConfig &cfg,
                                const LogSink &log = nullptr);

}  // namespace fieldasr

#endif  // FIELDASR_MODEL_TRAINER_H_
