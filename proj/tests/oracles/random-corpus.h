// oracles/random-corpus.h

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

#ifndef FIELDASR_TESTS_ORACLES_RANDOM_CORPUS_H_
#define FIELDASR_TESTS_ORACLES_RANDOM_CORPUS_H_

#include <random>
#include <set>
#include <string>

#include "corpus/corpus.h"

namespace fieldasr {
namespace oracle {

// Random valid corpus: a few recordings, speakers, genres and non-ASCII text
// (including inner and edge spaces). Paths point nowhere on purpose.
inline Corpus RandomCorpus(std::mt19937 &rng, int max_utts = 12) {
  static const char *kPieces[] = {"a", "b", "k", "ʈʂʰ", "ə", "˧", "你", "é", " ", ",", "ŋ", "1"};
  static const char *kGenres[] = {"narrative", "song", "dialogue"};
  std::uniform_int_distribution<int> n_rec(1, 3), n_utt(0, max_utts), piece(0, 11), len(0, 12),
      spk(0, 2), genre(-1, 2), start(0, 50000), dur(1, 8000);
  Corpus c;
  int recs = n_rec(rng);
  for (int r = 0; r < recs; ++r)
    c.recordings.push_back({"rec" + std::to_string(r), "/nonexistent/rec" + std::to_string(r) + ".wav",
                            16000, 60000});
  std::set<std::string> ids;
  int utts = n_utt(rng);
  for (int i = 0; i < utts; ++i) {
    Utterance u;
    u.recording_id = c.recordings[rng() % c.recordings.size()].id;
    u.speaker_id = "spk" + std::to_string(spk(rng));
    u.start_ms = start(rng);
    u.end_ms = u.start_ms + dur(rng);
    int n = len(rng);
    for (int k = 0; k < n; ++k) u.text += kPieces[piece(rng)];
    int g = genre(rng);
    if (g >= 0) u.genre = kGenres[g];
    u.id = MakeUtteranceId(u.speaker_id, u.recording_id, u.start_ms);
    if (!ids.insert(u.id).second) continue;
    c.utterances.push_back(std::move(u));
  }
  NormalizeCorpus(&c);
  return c;
}

}  // namespace oracle
}  // namespace fieldasr

#endif  // FIELDASR_TESTS_ORACLES_RANDOM_CORPUS_H_
