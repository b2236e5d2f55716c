// eval/cer-test.cc

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

#include <random>

#include "base/error.h"
#include "base/text-utils.h"
#include "edit-distance-oracle.h"
#include "eval/cer.h"

namespace fieldasr {

TEST_CASE("examples") {
  CHECK(Cer("abc", "abc").cer == 0.0);
  CerReport d = Cer("ab", "");
  CHECK(d.deletions == 2);
  CHECK(d.cer == 1.0);
  CerReport k = Cer("kato", "karto");
  CHECK(k.insertions == 1);
  CHECK(k.edits() == 1);
  CHECK(k.cer == 0.25);
  CHECK(Cer("", "").cer == 0.0);
  try {
    Cer("", "x");
    FAIL("expected");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kUndefinedRate);
  }
  CHECK(Cer("ʈʂʰa", "ʈʂa").deletions == 1);  // code points, not bytes
  CHECK(Cer("a b", "ab").deletions == 1);     // the space counts
  CHECK(Cer("a", "bcd").cer == 3.0);
}

TEST_CASE("tie order prefers substitution, then deletion") {
  // ab -> ba: two substitutions rather than a deletion plus an insertion.
  CerReport r = Cer("ab", "ba");
  CHECK(r.substitutions == 2);
  CHECK(r.insertions == 0);
  CHECK(r.deletions == 0);
}

static std::u32string RandomString(std::mt19937 &rng, size_t max_len, int alphabet) {
  std::uniform_int_distribution<size_t> len(0, max_len);
  std::uniform_int_distribution<int> ch(0, alphabet - 1);
  std::u32string s;
  for (size_t n = len(rng); n > 0; --n) s.push_back(U'a' + ch(rng));
  return s;
}

TEST_CASE("counts match the DP oracle on 1000 random pairs") {
  std::mt19937 rng(1000);
  for (int i = 0; i < 1000; ++i) {
    std::u32string a = RandomString(rng, 30, 1 + i % 6), b = RandomString(rng, 30, 1 + i % 6);
    CerReport r = EditDistance(a, b);
    oracle::EditCounts o = oracle::Levenshtein(a, b);
    CHECK(r.substitutions == o.substitutions);
    CHECK(r.insertions == o.insertions);
    CHECK(r.deletions == o.deletions);
  }
}

TEST_CASE("symmetry and triangle inequality") {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    std::u32string a = RandomString(rng, 15, 3), b = RandomString(rng, 15, 3),
                   c = RandomString(rng, 15, 3);
    CHECK(EditDistance(a, b).edits() == EditDistance(b, a).edits());
    CHECK(EditDistance(a, c).edits() <= EditDistance(a, b).edits() + EditDistance(b, c).edits());
  }
}

TEST_CASE("corpus CER is a micro average") {
  std::vector<TextPair> same = {{"abc", "abc"}, {"abc", "abc"}};
  CHECK(CorpusCer(same).cer == 0.0);
  std::vector<TextPair> equal_len = {{"abcd", "abce"}, {"wxyz", "wx"}};
  CHECK(CorpusCer(equal_len).cer == doctest::Approx((0.25 + 0.5) / 2).epsilon(1e-15));

  std::mt19937 rng(8);
  std::vector<TextPair> pairs;
  long edits = 0, chars = 0;
  for (int i = 0; i < 50; ++i) {
    std::u32string a = RandomString(rng, 20, 4), b = RandomString(rng, 20, 4);
    pairs.emplace_back(EncodeUtf8(a), EncodeUtf8(b));
    edits += oracle::Levenshtein(a, b).total();
    chars += static_cast<long>(a.size());
  }
  CHECK(CorpusCer(pairs).cer == static_cast<double>(edits) / static_cast<double>(chars));
  std::vector<TextPair> empty_refs = {{"", ""}, {"", "a"}};
  CHECK_THROWS_AS(CorpusCer(empty_refs), Error);
}

}  // namespace fieldasr
