// model/model-config.h

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

#ifndef FIELDASR_MODEL_MODEL_CONFIG_H_
#define FIELDASR_MODEL_MODEL_CONFIG_H_

#include <cstdint>

#include <nlohmann/json.hpp>

#include "feat/logmel.h"

namespace fieldasr {

struct ModelConfig {
  int input_dim = 40;        // feature dim before frame stacking
  int encoder_layers = 3;    // BiLSTM layers
  int hidden_size = 320;     // per direction
  int decoder_layers = 1;
  int decoder_hidden = 320;  // also the token embedding size
  int attention_dim = 320;   // additive attention
  double ctc_weight = 0.5;   // lambda
  int frame_stacking = 1;

  // Throws kParameter.
  void Validate() const;
  bool operator==(const ModelConfig &) const = default;
};

struct TrainConfig {
  int epochs = 20;
  int batch_utterances = 30;
  double ctc_weight = 0.5;
  uint64_t seed = 0;
  double clip_norm = 5.0;
  bool sort_by_length = true;
  double adadelta_rho = 0.95;
  double adadelta_epsilon = 1e-8;

  void Validate() const;
  bool operator==(const TrainConfig &) const = default;
};

struct DecodeOptions {
  int beam = 5;
  double ctc_weight = 0.5;
  int max_len = 0;  // 0: number of encoder frames
};

nlohmann::json ToJson(const ModelConfig &c);
nlohmann::json ToJson(const TrainConfig &c);
nlohmann::json ToJson(const FeatureConfig &c);
// Missing keys keep their defaults; wrong types throw kParse.
ModelConfig ModelConfigFromJson(const nlohmann::json &j);
TrainConfig TrainConfigFromJson(const nlohmann::json &j);
FeatureConfig FeatureConfigFromJson(const nlohmann::json &j);

}  // namespace fieldasr

#endif  // FIELDASR_MODEL_MODEL_CONFIG_H_
