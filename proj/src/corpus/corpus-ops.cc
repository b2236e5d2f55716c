// corpus/corpus-ops.cc

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

#include "corpus/corpus-ops.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "base/error.h"

namespace fieldasr {

namespace {

Corpus WithUtterances(const Corpus &corpus, std::vector<Utterance> utts) {
  Corpus out{corpus.recordings, std::move(utts)};
  std::sort(out.utterances.begin(), out.utterances.end(),
            [](const Utterance &a, const Utterance &b) { return a.id < b.id; });
  PruneRecordings(&out);
  return out;
}

}  // namespace

Corpus FilterCorpus(const Corpus &corpus, const std::optional<std::string> &speaker,
                    const std::set<std::string> &exclude_genres) {
  if (speaker) {
    std::vector<std::string> speakers = corpus.Speakers();
    if (!std::binary_search(speakers.begin(), speakers.end(), *speaker)) {
      std::ostringstream names;
      for (size_t i = 0; i < speakers.size(); ++i) names << (i ? ", " : "") << speakers[i];
      Fail(ErrorKind::kNotFound, "speaker '", *speaker, "' not in corpus; speakers: [",
           names.str(), "]");
    }
  }
  std::vector<Utterance> kept;
  for (const Utterance &u : corpus.utterances) {
    if (speaker && u.speaker_id != *speaker) continue;
    if (u.genre && exclude_genres.count(*u.genre)) continue;
    kept.push_back(u);
  }
  return WithUtterances(corpus, std::move(kept));
}

std::pair<Corpus, Corpus> SplitCorpus(const Corpus &corpus, double dev_fraction, uint64_t seed) {
  const size_t n = corpus.utterances.size();
  if (n < 2) Fail(ErrorKind::kSize, "need at least 2 utterances to split, got ", n);
  if (!(dev_fraction > 0.0 && dev_fraction < 1.0))
    Fail(ErrorKind::kParameter, "dev_fraction must be in (0, 1), got ", dev_fraction);
  size_t n_dev = std::max<size_t>(1, static_cast<size_t>(std::floor(n * dev_fraction)));
  std::vector<size_t> perm = SeededPermutation(n, seed);
  std::vector<Utterance> train, dev;
  for (size_t i = 0; i < n; ++i)
    (i < n_dev ? dev : train).push_back(corpus.utterances[perm[i]]);
  return {WithUtterances(corpus, std::move(train)), WithUtterances(corpus, std::move(dev))};
}

std::vector<Corpus> NestedSubsets(const Corpus &corpus, const std::vector<double> &minutes,
                                  uint64_t seed) {
  for (size_t k = 0; k < minutes.size(); ++k) {
    if (!(minutes[k] > 0)) Fail(ErrorKind::kParameter, "subset minutes must be positive");
    if (k > 0 && !(minutes[k] > minutes[k - 1]))
      Fail(ErrorKind::kParameter, "subset minutes must be strictly ascending");
  }
  // Targets are compared with a microsecond of slack so that minutes computed
  // as total_ms / 60000 still select the whole corpus.
  auto target_ms = [](double m) { return m * 60000.0 - 1e-3; };
  const int64_t total = corpus.TotalDurationMs();
  if (!minutes.empty() && target_ms(minutes.back()) > static_cast<double>(total))
    Fail(ErrorKind::kRange, "requested ", minutes.back(), " minutes but the corpus has only ",
         total / 60000.0, " minutes");
  std::vector<size_t> perm = SeededPermutation(corpus.utterances.size(), seed);
  std::vector<Corpus> subsets;
  std::vector<Utterance> prefix;
  int64_t sum = 0;
  size_t next = 0;
  for (double m : minutes) {
    while (static_cast<double>(sum) < target_ms(m)) {
      const Utterance &u = corpus.utterances[perm[next++]];
      sum += u.duration_ms();
      prefix.push_back(u);
    }
    subsets.push_back(WithUtterances(corpus, prefix));
  }
  return subsets;
}

}  // namespace fieldasr
