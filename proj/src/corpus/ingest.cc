// corpus/ingest.cc

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

#include "corpus/ingest.h"

#include <algorithm>

#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/elan.h"
#include "corpus/xml-dom.h"
#include "feat/wave-io.h"

namespace fieldasr {

namespace fs = std::filesystem;

TranscriptionFormat DetectFormat(const TranscriptionFile &file) {
  std::string ext = fs::path(file.name).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  if (ext == ".eaf") return TranscriptionFormat::kElan;
  std::unique_ptr<XmlElement> root = ParseXml(file.bytes);
  if (root->name == "TEXT") return TranscriptionFormat::kPangloss;
  if (root->name == "ANNOTATION_DOCUMENT") return TranscriptionFormat::kElan;
  Fail(ErrorKind::kStructure, "unrecognised transcription root element ", root->name);
}

std::string RecordingIdFor(const std::string &file_name) {
  return SanitizeId(fs::path(file_name).stem().string());
}

IngestResult BuildCorpus(const std::vector<TranscriptionFile> &files,
                         const std::map<std::string, fs::path> &audio_by_recording,
                         const IngestOptions &options) {
  IngestResult result;
  for (const TranscriptionFile &file : files) {
    try {
      std::string rec_id = RecordingIdFor(file.name);
      if (std::any_of(result.corpus.recordings.begin(), result.corpus.recordings.end(),
                      [&](const Recording &r) { return r.id == rec_id; }))
        Fail(ErrorKind::kIntegrity, "recording id ", rec_id, " used by two transcription files");
      std::string elan = DetectFormat(file) == TranscriptionFormat::kPangloss
                             ? PanglossToElan(file.bytes)
                             : file.bytes;
      std::vector<Utterance> utts = ParseElan(elan, rec_id, options.tier);
      auto audio = audio_by_recording.find(rec_id);
      if (audio == audio_by_recording.end())
        Fail(ErrorKind::kNotFound, "no audio for recording ", rec_id);
      WaveInfo info = ReadWaveInfo(audio->second);
      Recording rec{rec_id, audio->second.string(), info.sample_rate, info.duration_ms()};
      auto genre = options.genres.find(rec_id);
      for (Utterance &u : utts) {
        if (u.end_ms > rec.duration_ms)
          Fail(ErrorKind::kRange, "utterance ", u.id, " ends at ", u.end_ms,
               " ms, after the end of the audio (", rec.duration_ms, " ms)");
        if (genre != options.genres.end()) u.genre = genre->second;
      }
      result.corpus.recordings.push_back(std::move(rec));
      for (Utterance &u : utts) result.corpus.utterances.push_back(std::move(u));
    } catch (const Error &e) {
      result.problems.push_back({file.name, e.kind(), e.what()});
    }
  }
  NormalizeCorpus(&result.corpus);
  return result;
}

CorpusSummary Summarize(const Corpus &corpus) {
  return {corpus.utterances.size(), corpus.TotalDurationMs() / 60000.0, corpus.Speakers(),
          corpus.Genres()};
}

nlohmann::json SummaryToJson(const CorpusSummary &s) {
  return {{"utterances", s.utterances},
          {"total_minutes", s.total_minutes},
          {"speakers", s.speakers},
          {"genres", s.genres}};
}

nlohmann::json CorpusToJson(const Corpus &corpus) {
  nlohmann::json recs = nlohmann::json::array(), utts = nlohmann::json::array();
  for (const Recording &r : corpus.recordings)
    recs.push_back({{"id", r.id},
                    {"path", r.path},
                    {"sample_rate", r.sample_rate},
                    {"duration_ms", r.duration_ms}});
  for (const Utterance &u : corpus.utterances) {
    nlohmann::json j = {{"id", u.id},           {"recording_id", u.recording_id},
                        {"speaker_id", u.speaker_id}, {"start_ms", u.start_ms},
                        {"end_ms", u.end_ms},   {"text", u.text}};
    if (u.genre) j["genre"] = *u.genre;
    utts.push_back(std::move(j));
  }
  return {{"recordings", recs}, {"utterances", utts}};
}

Corpus CorpusFromJson(const nlohmann::json &j) {
  Corpus corpus;
  try {
    for (const auto &r : j.at("recordings"))
      corpus.recordings.push_back({r.at("id").get<std::string>(), r.at("path").get<std::string>(),
                                   r.at("sample_rate").get<int>(),
                                   r.at("duration_ms").get<int64_t>()});
    for (const auto &u : j.at("utterances")) {
      Utterance utt;
      utt.id = u.at("id").get<std::string>();
      utt.recording_id = u.at("recording_id").get<std::string>();
      utt.speaker_id = u.at("speaker_id").get<std::string>();
      utt.start_ms = u.at("start_ms").get<int64_t>();
      utt.end_ms = u.at("end_ms").get<int64_t>();
      utt.text = u.at("text").get<std::string>();
      if (u.contains("genre")) utt.genre = u.at("genre").get<std::string>();
      corpus.utterances.push_back(std::move(utt));
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kStructure, "bad corpus document: ", e.what());
  }
  NormalizeCorpus(&corpus);
  return corpus;
}

void SaveCorpus(const Corpus &corpus, const fs::path &path) {
  WriteFileBytes(path, CorpusToJson(corpus).dump(1) + "\n");
}

Corpus LoadCorpus(const fs::path &path) {
  nlohmann::json j = nlohmann::json::parse(ReadFileBytes(path), nullptr, false);
  if (j.is_discarded()) Fail(ErrorKind::kParse, path.string(), " is not valid JSON");
  return CorpusFromJson(j);
}

}  // namespace fieldasr
