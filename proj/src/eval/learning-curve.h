// eval/learning-curve.h

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

#ifndef FIELDASR_EVAL_LEARNING_CURVE_H_
#define FIELDASR_EVAL_LEARNING_CURVE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/corpus.h"
#include "feat/logmel.h"
#include "model/model-config.h"
#include "model/trainer.h"

namespace fieldasr {

// Pairs utterances with their feature matrices (by utterance id) and encodes
// the texts. kNotFound when an utterance has no features.
std::vector<Example> ExamplesFor(const Corpus &corpus, std::span<const FeatureMatrix> features,
                                 const CharInventory &vocab);

// Corpus CER of joint decoding over the examples, as a ratio.
double DecodeCer(HybridModel &model, std::span<const Example> examples,
                 const DecodeOptions &options);

struct CurvePoint {
  double train_minutes = 0.0;  // actual duration of the subset
  double cer_percent = 0.0;    // dev CER
  int epochs_used = 0;
  bool operator==(const CurvePoint &) const = default;
};

struct CurveSettings {
  ModelConfig model;
  TrainConfig train;     // train.seed also seeds model initialization
  DecodeOptions decode;
  uint64_t subset_seed = 0;
};

// One fresh model per requested size, trained on nested subsets of
// train_pool and scored on dev. The vocabulary comes from the whole pool so
// all points share it. subsets (optional) receives the training subsets.
std::vector<CurvePoint> LearningCurve(const Corpus &train_pool, const Corpus &dev,
                                      std::span<const FeatureMatrix> features,
                                      const std::vector<double> &minutes,
                                      const CurveSettings &settings,
                                      const LogSink &log = nullptr,
                                      std::vector<Corpus> *subsets = nullptr);

struct ProfileRow {
  int epoch = 0;
  double train_cer = 0.0;
  double dev_cer = 0.0;
  bool operator==(const ProfileRow &) const = default;
};

// Per-epoch CER series of a training history. kSize on an empty history.
std::vector<ProfileRow> TrainingProfile(std::span<const EpochMetrics> history);

// CSV with a header row, LF endings and round-trip float precision.
std::string ProfileToCsv(std::span<const ProfileRow> rows);
std::vector<ProfileRow> ProfileFromCsv(std::string_view csv);
std::string CurveToCsv(std::span<const CurvePoint> points);
std::vector<CurvePoint> CurveFromCsv(std::string_view csv);

}  // namespace fieldasr

#endif  // FIELDASR_EVAL_LEARNING_CURVE_H_
