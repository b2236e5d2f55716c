// corpus/corpus.cc

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

#include "corpus/corpus.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "base/error.h"
#include "base/text-utils.h"

namespace fieldasr {

const Recording *Corpus::FindRecording(std::string_view id) const {
  auto it = std::lower_bound(recordings.begin(), recordings.end(), id,
                             [](const Recording &r, std::string_view v) { return r.id < v; });
  if (it != recordings.end() && it->id == id) return &*it;
  return nullptr;
}

int64_t Corpus::TotalDurationMs() const {
  int64_t total = 0;
  for (const Utterance &u : utterances) total += u.duration_ms();
  return total;
}

std::vector<std::string> Corpus::Speakers() const {
  std::set<std::string> s;
  for (const Utterance &u : utterances) s.insert(u.speaker_id);
  return {s.begin(), s.end()};
}

std::vector<std::string> Corpus::Genres() const {
  std::set<std::string> s;
  for (const Utterance &u : utterances)
    if (u.genre) s.insert(*u.genre);
  return {s.begin(), s.end()};
}

std::string MakeUtteranceId(std::string_view speaker_id, std::string_view recording_id,
                            int64_t start_ms) {
  char digits[32];
  std::snprintf(digits, sizeof(digits), "%08lld", static_cast<long long>(start_ms));
  std::string id(speaker_id);
  id += '-';
  id += recording_id;
  id += '-';
  id += digits;
  return id;
}

void NormalizeCorpus(Corpus *corpus) {
  std::sort(corpus->recordings.begin(), corpus->recordings.end(),
            [](const Recording &a, const Recording &b) { return a.id < b.id; });
  std::sort(corpus->utterances.begin(), corpus->utterances.end(),
            [](const Utterance &a, const Utterance &b) { return a.id < b.id; });
  for (size_t i = 0; i < corpus->recordings.size(); ++i) {
    const Recording &r = corpus->recordings[i];
    if (!IsSafeId(r.id)) Fail(ErrorKind::kStructure, "recording id '", r.id, "' is not [A-Za-z0-9_-]+");
    if (i > 0 && corpus->recordings[i - 1].id == r.id)
      Fail(ErrorKind::kIntegrity, "duplicate recording id ", r.id);
    if (r.sample_rate <= 0 || r.duration_ms < 0)
      Fail(ErrorKind::kStructure, "recording ", r.id, " has bad rate or duration");
  }
  for (size_t i = 0; i < corpus->utterances.size(); ++i) {
    const Utterance &u = corpus->utterances[i];
    if (i > 0 && corpus->utterances[i - 1].id == u.id)
      Fail(ErrorKind::kIntegrity, "duplicate utterance id ", u.id);
    if (u.id.empty() || u.id.find_first_of(" \t\r\n") != std::string::npos)
      Fail(ErrorKind::kStructure, "bad utterance id '", u.id, "'");
    if (!IsSafeId(u.speaker_id))
      Fail(ErrorKind::kStructure, "utterance ", u.id, " has bad speaker id '", u.speaker_id, "'");
    const Recording *r = corpus->FindRecording(u.recording_id);
    if (r == nullptr)
      Fail(ErrorKind::kStructure, "utterance ", u.id, " refers to unknown recording ",
           u.recording_id);
    if (u.start_ms < 0 || u.end_ms <= u.start_ms || u.end_ms > r->duration_ms)
      Fail(ErrorKind::kRange, "utterance ", u.id, " spans [", u.start_ms, ", ", u.end_ms,
           ") ms outside recording ", r->id, " of ", r->duration_ms, " ms");
  }
}

void PruneRecordings(Corpus *corpus) {
  std::set<std::string> used;
  for (const Utterance &u : corpus->utterances) used.insert(u.recording_id);
  std::erase_if(corpus->recordings, [&](const Recording &r) { return !used.count(r.id); });
}

}  // namespace fieldasr
