// service/pipeline.h

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

#ifndef FIELDASR_SERVICE_PIPELINE_H_
#define FIELDASR_SERVICE_PIPELINE_H_

#include <span>
#include <string>
#include <vector>

#include "corpus/corpus.h"
#include "feat/cmvn.h"
#include "feat/logmel.h"
#include "model/hybrid-model.h"
#include "model/model-config.h"
#include "model/trainer.h"

// Compositions shared by the command line and the HTTP service.

namespace fieldasr {

// Log-mel features for every utterance; each WAV is read once.
std::vector<FeatureMatrix> ComputeCorpusFeatures(const Corpus &corpus, const FeatureConfig &cfg);

struct TrainRequest {
  ModelConfig model;
  TrainConfig train;
  double dev_fraction = 0.1;  // 0 trains on everything
};

struct TrainOutcome {
  HybridModel model;
  std::vector<EpochMetrics> history;
  Corpus train, dev;
};

// Splits (seeded by train.seed), builds the vocabulary from the training
// texts, fits CMVN on the training features, initializes with train.seed
// and trains. The returned model carries the feature config and CMVN.
TrainOutcome TrainOnCorpus(const Corpus &corpus, std::span<const FeatureMatrix> features,
                           const FeatureConfig &feature_config, const TrainRequest &request,
                           const LogSink &log = nullptr);

// CMVN from the model (when present) applied to raw features.
nn::Tensor NormalizeFor(const HybridModel &model, const FeatureMatrix &raw);

inline constexpr double kWindowSeconds = 10.0;
inline constexpr double kWindowOverlapSeconds = 1.0;

struct SampleRange {
  size_t begin = 0, end = 0;
};
// Fixed windows with the given overlap covering [0, n). At least one.
std::vector<SampleRange> DecodingWindows(size_t num_samples, int sample_rate,
                                         double window_s = kWindowSeconds,
                                         double overlap_s = kWindowOverlapSeconds);

struct TranscriptWindow {
  double start_s = 0.0, end_s = 0.0;
  std::string text;  // the part kept after stitching
};

struct Transcript {
  std::vector<TranscriptWindow> windows;
  std::string text;
};

// Decodes each window jointly and stitches: text in an overlap is taken
// from the earlier window before the overlap midpoint and from the later
// one after it. Character times come from the CTC alignment of the
// hypothesis (spread evenly when CTC cannot align it).
Transcript TranscribeSamples(HybridModel &model, std::span<const double> samples,
                             int sample_rate, const DecodeOptions &options);

}  // namespace fieldasr

#endif  // FIELDASR_SERVICE_PIPELINE_H_
