// corpus/corpus-ops.h

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

#ifndef FIELDASR_CORPUS_CORPUS_OPS_H_
#define FIELDASR_CORPUS_CORPUS_OPS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "base/seeded-random.h"
#include "corpus/corpus.h"

namespace fieldasr {

// Utterances of `speaker` (if given) whose genre is not excluded. Utterances
// without a genre are never excluded.
Corpus FilterCorpus(const Corpus &corpus, const std::optional<std::string> &speaker,
                    const std::set<std::string> &exclude_genres);

// dev gets max(1, floor(n * dev_fraction)) utterances after a seeded shuffle.
std::pair<Corpus, Corpus> SplitCorpus(const Corpus &corpus, double dev_fraction, uint64_t seed);

// Subset k is the shortest prefix of a seeded utterance order whose summed
// duration reaches minutes[k]; so every subset contains the smaller ones.
std::vector<Corpus> NestedSubsets(const Corpus &corpus, const std::vector<double> &minutes,
                                  uint64_t seed);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_CORPUS_OPS_H_
