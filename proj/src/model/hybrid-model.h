// model/hybrid-model.h

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

#ifndef FIELDASR_MODEL_HYBRID_MODEL_H_
#define FIELDASR_MODEL_HYBRID_MODEL_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ctc/char-inventory.h"
#include "feat/cmvn.h"
#include "feat/logmel.h"
#include "model/model-config.h"
#include "nn/autodiff.h"
#include "nn/lstm.h"

namespace fieldasr {

/// Encoder: stacked BiLSTM over (optionally stacked) feature frames, with a
/// linear CTC head. Decoder: one LSTM layer fed [embedding(prev); context],
/// additive attention over the encoder states, output layer on
/// [decoder state; context]. eos is also the start symbol.
///
/// The front-end settings (feature config, CMVN stats) ride along so a
/// checkpoint can transcribe raw audio on its own.
class HybridModel {
 public:
  HybridModel(const ModelConfig &config, CharInventory vocab);

  // LeCun normal weights (sd 1/sqrt(fan_in)), N(0, 1) embeddings, zero
  // biases except LSTM forget gates at 1.
  void Initialize(uint64_t seed);

  const ModelConfig &config() const { return config_; }
  const CharInventory &vocab() const { return vocab_; }
  int vocab_size() const { return vocab_.size(); }
  std::vector<nn::Parameter *> Parameters();
  std::vector<const nn::Parameter *> Parameters() const;
  size_t ParameterCount() const;
  // The training-time lambda lives in the config; callers may override it.
  double ctc_weight() const { return config_.ctc_weight; }

  // [ceil(T / k), F * k], zero-padded at the end. Throws kShape when the
  // feature dim differs from config.input_dim.
  nn::Tensor StackFrames(const nn::Tensor &features) const;

  struct Encoded {
    nn::Var states;         // [T', 2H]
    nn::Var ctc_log_probs;  // [T', V]
  };
  Encoded Encode(nn::Tape &tape, const nn::Tensor &features);

  struct DecoderState {
    nn::LstmState lstm;
    nn::Var context;  // [1, 2H]
  };
  // Per-utterance decoder inputs derived once from the encoder states.
  struct AttentionMemory {
    nn::Var states;     // [T', 2H]
    nn::Var projected;  // states W_enc + b, [T', A]
  };
  AttentionMemory PrepareAttention(nn::Tape &tape, nn::Var states);
  DecoderState InitialDecoderState(nn::Tape &tape);
  // Consumes prev_token, returns the new state and logits [1, V].
  std::pair<DecoderState, nn::Var> DecoderStep(nn::Tape &tape, const AttentionMemory &memory,
                                               const DecoderState &state, int prev_token);

  FeatureConfig feature_config;
  std::optional<CmvnStats> cmvn;

 private:
  ModelConfig config_;
  CharInventory vocab_;
  std::vector<nn::BiLstmParams> encoder_;
  nn::Parameter ctc_w_, ctc_b_;
  nn::Parameter embedding_;
  nn::LstmParams decoder_;
  nn::Parameter att_w_enc_, att_b_, att_w_dec_, att_v_;
  nn::Parameter out_w_, out_b_;
};

}  // namespace fieldasr

#endif  // FIELDASR_MODEL_HYBRID_MODEL_H_
