// corpus/ingest.h

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

#ifndef FIELDASR_CORPUS_INGEST_H_
#define FIELDASR_CORPUS_INGEST_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "base/error.h"
#include "corpus/corpus.h"

namespace fieldasr {

enum class TranscriptionFormat { kElan, kPangloss };

struct TranscriptionFile {
  std::string name;   // file name; its stem becomes the recording id
  std::string bytes;
};

struct IngestOptions {
  std::optional<std::string> tier;
  std::map<std::string, std::string> genres;  // recording id -> genre
};

struct FileProblem {
  std::string file;
  ErrorKind kind;
  std::string message;
};

struct IngestResult {
  Corpus corpus;
  std::vector<FileProblem> problems;  // files listed here were skipped
};

// ".eaf" is ELAN; anything else is decided by the XML root element.
TranscriptionFormat DetectFormat(const TranscriptionFile &file);
std::string RecordingIdFor(const std::string &file_name);

// Parses every transcription (Pangloss goes through the ELAN converter),
// pairs it with audio_by_recording[recording id] and validates times against
// the WAV header. Failures are collected per file instead of thrown; only a
// corpus-level conflict (duplicate utterance ids) throws.
IngestResult BuildCorpus(const std::vector<TranscriptionFile> &files,
                         const std::map<std::string, std::filesystem::path> &audio_by_recording,
                         const IngestOptions &options);

struct CorpusSummary {
  size_t utterances = 0;
  double total_minutes = 0.0;
  std::vector<std::string> speakers;
  std::vector<std::string> genres;
};
CorpusSummary Summarize(const Corpus &corpus);

nlohmann::json SummaryToJson(const CorpusSummary &summary);
nlohmann::json CorpusToJson(const Corpus &corpus);
Corpus CorpusFromJson(const nlohmann::json &j);
void SaveCorpus(const Corpus &corpus, const std::filesystem::path &path);
Corpus LoadCorpus(const std::filesystem::path &path);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_INGEST_H_
