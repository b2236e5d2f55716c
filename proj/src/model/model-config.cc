// model/model-config.cc

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

#include "model/model-config.h"

#include "base/error.h"

namespace fieldasr {

void ModelConfig::Validate() const {
  if (input_dim < 1 || encoder_layers < 1 || hidden_size < 1 || decoder_hidden < 1 ||
      attention_dim < 1 || frame_stacking < 1)
    Fail(ErrorKind::kParameter, "model sizes must be positive");
  if (decoder_layers != 1)
    Fail(ErrorKind::kParameter, "only a single decoder layer is supported, got ", decoder_layers);
  if (!(ctc_weight >= 0.0 && ctc_weight <= 1.0))
    Fail(ErrorKind::kParameter, "ctc_weight must be in [0, 1], got ", ctc_weight);
}

void TrainConfig::Validate() const {
  if (epochs < 1) Fail(ErrorKind::kParameter, "epochs must be >= 1, got ", epochs);
  if (batch_utterances < 1)
    Fail(ErrorKind::kParameter, "batch_utterances must be >= 1, got ", batch_utterances);
  if (!(ctc_weight >= 0.0 && ctc_weight <= 1.0))
    Fail(ErrorKind::kParameter, "ctc_weight must be in [0, 1], got ", ctc_weight);
  if (!(adadelta_rho > 0.0 && adadelta_rho < 1.0) || !(adadelta_epsilon > 0.0))
    Fail(ErrorKind::kParameter, "bad adadelta settings");
}

nlohmann::json ToJson(const ModelConfig &c) {
  return {{"input_dim", c.input_dim},           {"encoder_layers", c.encoder_layers},
          {"hidden_size", c.hidden_size},       {"decoder_layers", c.decoder_layers},
          {"decoder_hidden", c.decoder_hidden}, {"attention_dim", c.attention_dim},
          {"ctc_weight", c.ctc_weight},         {"frame_stacking", c.frame_stacking}};
}

nlohmann::json ToJson(const TrainConfig &c) {
  return {{"epochs", c.epochs},
          {"batch_utterances", c.batch_utterances},
          {"ctc_weight", c.ctc_weight},
          {"seed", c.seed},
          {"clip_norm", c.clip_norm},
          {"sort_by_length", c.sort_by_length},
          {"adadelta_rho", c.adadelta_rho},
          {"adadelta_epsilon", c.adadelta_epsilon}};
}

nlohmann::json ToJson(const FeatureConfig &c) {
  return {{"sample_rate", c.sample_rate}, {"window_ms", c.window_ms}, {"hop_ms", c.hop_ms},
          {"n_fft", c.n_fft},             {"n_mels", c.n_mels},       {"mel_fmin", c.mel_fmin},
          {"mel_fmax", c.mel_fmax},       {"log_floor", c.log_floor}};
}

namespace {

template <typename T>
void Read(const nlohmann::json &j, const char *key, T *out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kParse, "config field ", key, ": ", e.what());
  }
}

void CheckObject(const nlohmann::json &j, const char *what) {
  if (!j.is_object()) Fail(ErrorKind::kParse, what, " must be an object");
}

}  // namespace

ModelConfig ModelConfigFromJson(const nlohmann::json &j) {
  CheckObject(j, "model config");
  ModelConfig c;
  Read(j, "input_dim", &c.input_dim);
  Read(j, "encoder_layers", &c.encoder_layers);
  Read(j, "hidden_size", &c.hidden_size);
  Read(j, "decoder_layers", &c.decoder_layers);
  Read(j, "decoder_hidden", &c.decoder_hidden);
  Read(j, "attention_dim", &c.attention_dim);
  Read(j, "ctc_weight", &c.ctc_weight);
  Read(j, "frame_stacking", &c.frame_stacking);
  return c;
}

TrainConfig TrainConfigFromJson(const nlohmann::json &j) {
  CheckObject(j, "train config");
  TrainConfig c;
  Read(j, "epochs", &c.epochs);
  Read(j, "batch_utterances", &c.batch_utterances);
  Read(j, "ctc_weight", &c.ctc_weight);
  Read(j, "seed", &c.seed);
  Read(j, "clip_norm", &c.clip_norm);
  Read(j, "sort_by_length", &c.sort_by_length);
  Read(j, "adadelta_rho", &c.adadelta_rho);
  Read(j, "adadelta_epsilon", &c.adadelta_epsilon);
  return c;
}

FeatureConfig FeatureConfigFromJson(const nlohmann::json &j) {
  CheckObject(j, "feature config");
  FeatureConfig c;
  Read(j, "sample_rate", &c.sample_rate);
  Read(j, "window_ms", &c.window_ms);
  Read(j, "hop_ms", &c.hop_ms);
  Read(j, "n_fft", &c.n_fft);
  Read(j, "n_mels", &c.n_mels);
  Read(j, "mel_fmin", &c.mel_fmin);
  Read(j, "mel_fmax", &c.mel_fmax);
  Read(j, "log_floor", &c.log_floor);
  return c;
}

}  // namespace fieldasr
