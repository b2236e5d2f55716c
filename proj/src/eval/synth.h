// eval/synth.h

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

#ifndef FIELDASR_EVAL_SYNTH_H_
#define FIELDASR_EVAL_SYNTH_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "corpus/corpus.h"
#include "feat/logmel.h"

namespace fieldasr {

// Toy language for exercising training end to end. Every character owns a
// random template vector; an utterance is its characters' templates, each
// held for template_frames_per_char frames, plus Gaussian noise.
struct SynthSpec {
  std::u32string alphabet = U"abcde";
  int template_frames_per_char = 5;
  double noise_sigma = 0.1;
  int min_chars = 3;
  int max_chars = 8;
  int num_utterances = 20;
  int feature_dim = 40;
  uint64_t seed = 0;

  void Validate() const;  // kParameter
};

struct SynthCorpus {
  Corpus corpus;                       // one recording per utterance
  std::vector<FeatureMatrix> features; // same order as corpus.utterances
  std::vector<std::vector<double>> templates;  // per alphabet character
};

// Durations are frames times 10 ms, matching the feature hop.
inline constexpr int64_t kSynthFrameMs = 10;

SynthCorpus MakeSynthCorpus(const SynthSpec &spec);

// Audio flavour for the file-based pipeline: each character is a chord of
// three sinusoids with character-specific frequencies, held for
// char_ms, with short silences around the utterance.
struct SynthAudioSpec {
  std::u32string alphabet = U"abcde";
  int char_ms = 120;
  int pad_ms = 100;
  int min_chars = 3;
  int max_chars = 6;
  int num_utterances = 10;
  double noise_amplitude = 0.01;
  int sample_rate = 16000;
  uint64_t seed = 0;

  void Validate() const;
};

struct SynthClip {
  std::string text;
  std::vector<double> samples;
};

SynthClip MakeSynthClip(const SynthAudioSpec &spec, const std::u32string &text,
                        uint64_t noise_seed);

// Writes <stem>.wav and <stem>.eaf (tier "T1") for each utterance, where
// each file holds one utterance. Returns the stems.
std::vector<std::string> WriteSynthAudioCorpus(const SynthAudioSpec &spec,
                                               const std::string &dir);

// Random text over the alphabet, length in [min_chars, max_chars].
std::u32string RandomSynthText(std::mt19937_64 &rng, const std::u32string &alphabet,
                               int min_chars, int max_chars);

}  // namespace fieldasr

#endif  // FIELDASR_EVAL_SYNTH_H_
