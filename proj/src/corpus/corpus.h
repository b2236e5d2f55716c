// corpus/corpus.h

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

#ifndef FIELDASR_CORPUS_CORPUS_H_
#define FIELDASR_CORPUS_CORPUS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fieldasr {

struct Recording {
  std::string id;
  std::string path;
  int sample_rate = 16000;
  int64_t duration_ms = 0;

  bool operator==(const Recording &) const = default;
};

struct Utterance {
  std::string id;
  std::string recording_id;
  std::string speaker_id;
  int64_t start_ms = 0;
  int64_t end_ms = 0;
  std::string text;  // NFC
  std::optional<std::string> genre;

  int64_t duration_ms() const { return end_ms - start_ms; }
  bool operator==(const Utterance &) const = default;
};

// Recordings are kept sorted by id, utterances sorted by id.
struct Corpus {
  std::vector<Recording> recordings;
  std::vector<Utterance> utterances;

  const Recording *FindRecording(std::string_view id) const;
  int64_t TotalDurationMs() const;
  std::vector<std::string> Speakers() const;  // sorted, unique
  std::vector<std::string> Genres() const;
  bool operator==(const Corpus &) const = default;
};

inline constexpr const char *kUnknownSpeaker = "unknown";

// "<speaker>-<recording>-<start_ms, 8 digits>".
std::string MakeUtteranceId(std::string_view speaker_id, std::string_view recording_id,
                            int64_t start_ms);

// Sorts both lists and checks every invariant: safe unique ids, utterance
// ids unique, recording references resolve, 0 <= start < end <= duration.
// Throws kIntegrity for duplicates and kStructure/kRange otherwise.
void NormalizeCorpus(Corpus *corpus);

// Keeps only recordings still referenced by some utterance.
void PruneRecordings(Corpus *corpus);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_CORPUS_H_
