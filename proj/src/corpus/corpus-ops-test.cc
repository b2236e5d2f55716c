// corpus/corpus-ops-test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "base/error.h"
#include "corpus/corpus-ops.h"
#include "random-corpus.h"

namespace fieldasr {

static Corpus MakeCorpus(const std::vector<std::tuple<std::string, int64_t, int64_t, std::string>> &rows) {
  Corpus c;
  c.recordings.push_back({"r", "", 16000, 10000000});
  for (const auto &[spk, start, end, genre] : rows) {
    Utterance u{MakeUtteranceId(spk, "r", start), "r", spk, start, end, "x" + spk, std::nullopt};
    if (!genre.empty()) u.genre = genre;
    c.utterances.push_back(u);
  }
  NormalizeCorpus(&c);
  return c;
}

static std::vector<std::string> Ids(const Corpus &c) {
  std::vector<std::string> ids;
  for (const Utterance &u : c.utterances) ids.push_back(u.id);
  return ids;
}

TEST_CASE("filter by speaker and genre") {
  Corpus c = MakeCorpus({{"A", 0, 10, "song"},
                         {"A", 20, 30, ""},
                         {"B", 40, 50, "song"},
                         {"B", 60, 70, "narrative"},
                         {"A", 80, 90, "narrative"}});
  Corpus a = FilterCorpus(c, std::string("A"), {});
  CHECK(a.utterances.size() == 3);
  for (const Utterance &u : a.utterances) CHECK(u.speaker_id == "A");
  CHECK(FilterCorpus(c, std::nullopt, {"song"}).utterances.size() == 3);
  Corpus both = FilterCorpus(c, std::string("A"), {"song"});
  CHECK(both.utterances.size() == 2);

  try {
    FilterCorpus(c, std::string("Z"), {});
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kNotFound);
    CHECK(std::string(e.what()).find("A, B") != std::string::npos);
  }
  CHECK(FilterCorpus(c, std::nullopt, {"song", "narrative"}).recordings.size() == 1);
}

TEST_CASE("filter matches a linear-scan predicate on random corpora") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    Corpus c = oracle::RandomCorpus(rng, 20);
    std::vector<std::string> speakers = c.Speakers();
    if (speakers.empty()) continue;
    std::string spk = speakers[rng() % speakers.size()];
    std::set<std::string> excl = {"song"};
    if (rng() % 2) excl.insert("dialogue");
    Corpus f = FilterCorpus(c, spk, excl);
    std::vector<std::string> expected;
    for (const Utterance &u : c.utterances)
      if (u.speaker_id == spk && !(u.genre && excl.count(*u.genre))) expected.push_back(u.id);
    CHECK(Ids(f) == expected);
    for (const Utterance &u : f.utterances) {
      auto it = std::find(c.utterances.begin(), c.utterances.end(), u);
      CHECK(it != c.utterances.end());
      CHECK(f.FindRecording(u.recording_id) != nullptr);
    }
    for (const Recording &r : f.recordings)
      CHECK(std::any_of(f.utterances.begin(), f.utterances.end(),
                        [&](const Utterance &u) { return u.recording_id == r.id; }));
  }
}

static Corpus NUtterances(int n, int64_t dur_ms = 1000) {
  std::vector<std::tuple<std::string, int64_t, int64_t, std::string>> rows;
  for (int i = 0; i < n; ++i) rows.emplace_back("s", i * 100000, i * 100000 + dur_ms, "");
  return MakeCorpus(rows);
}

TEST_CASE("split sizes, determinism and partition") {
  Corpus ten = NUtterances(10);
  auto [train, dev] = SplitCorpus(ten, 0.1, 42);
  CHECK(train.utterances.size() == 9);
  CHECK(dev.utterances.size() == 1);
  auto [train2, dev2] = SplitCorpus(ten, 0.1, 42);
  CHECK(train == train2);
  CHECK(dev == dev2);
  std::vector<std::string> all = Ids(train), d = Ids(dev);
  all.insert(all.end(), d.begin(), d.end());
  std::sort(all.begin(), all.end());
  CHECK(all == Ids(ten));

  CHECK(SplitCorpus(NUtterances(7), 0.25, 1).second.utterances.size() == 1);
  CHECK(SplitCorpus(NUtterances(2), 0.01, 1).second.utterances.size() == 1);
  CHECK(SplitCorpus(NUtterances(20), 0.3, 1).second.utterances.size() == 6);
  CHECK_THROWS_AS(SplitCorpus(NUtterances(1), 0.5, 1), Error);
  CHECK_THROWS_AS(SplitCorpus(NUtterances(5), 1.0, 1), Error);
  // Different seeds generally differ.
  CHECK(SplitCorpus(NUtterances(20), 0.5, 1).second != SplitCorpus(NUtterances(20), 0.5, 2).second);
}

TEST_CASE("nested subsets") {
  Corpus six = NUtterances(6, 30000);
  std::vector<Corpus> s = NestedSubsets(six, {1, 2}, 3);
  REQUIRE(s.size() == 2);
  CHECK(s[0].utterances.size() == 2);
  CHECK(s[1].utterances.size() == 4);
  std::vector<Corpus> whole = NestedSubsets(six, {3}, 3);
  CHECK(whole[0] == six);
  try {
    NestedSubsets(six, {4}, 3);
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kRange);
    CHECK(std::string(e.what()).find(" 3 minutes") != std::string::npos);
  }
  CHECK_THROWS_AS(NestedSubsets(six, {2, 1}, 3), Error);
}

TEST_CASE("nesting holds for 100 random corpora and seeds") {
  std::mt19937 rng(9);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    Corpus c = oracle::RandomCorpus(rng, 30);
    double total = c.TotalDurationMs() / 60000.0;
    if (total <= 0) continue;
    std::vector<double> minutes = {total * 0.1, total * 0.3, total * 0.6, total};
    std::vector<Corpus> s = NestedSubsets(c, minutes, rng());
    for (size_t k = 0; k < s.size(); ++k) {
      CHECK(s[k].TotalDurationMs() >= minutes[k] * 60000.0 - 1e-6);
      if (k + 1 < s.size()) {
        std::vector<std::string> a = Ids(s[k]), b = Ids(s[k + 1]);
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      }
    }
    CHECK(s.back().utterances == c.utterances);
    ++checked;
  }
  CHECK(checked > 80);
}

TEST_CASE("seeded permutation is a permutation") {
  std::vector<size_t> p = SeededPermutation(50, 77);
  std::vector<size_t> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < 50; ++i) CHECK(sorted[i] == i);
  CHECK(p == SeededPermutation(50, 77));
  CHECK(p != SeededPermutation(50, 78));
}

}  // namespace fieldasr
