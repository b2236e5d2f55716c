// corpus/clean-text-test.cc

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

#include "base/text-utils.h"
#include "corpus/clean-text.h"

namespace fieldasr {

// Straight-line reference: delete, lowercase, delete, split on whitespace,
// join with single spaces.
static std::string ReferenceClean(const std::string &s, const CleanConfig &c) {
  std::u32string kept, word, out;
  for (char32_t ch : DecodeUtf8(s))
    if (!c.remove_chars.count(ch) && !c.remove_chars.count(c.lowercase ? SimpleToLower(ch) : ch))
      kept.push_back(c.lowercase ? SimpleToLower(ch) : ch);
  if (!c.collapse_whitespace) return EncodeUtf8(kept);
  std::u32string sep = c.remove_chars.count(U' ') ? U"" : U" ";
  for (char32_t ch : kept + U" ") {
    if (!IsUnicodeWhitespace(ch)) { word.push_back(ch); continue; }
    if (!word.empty()) out += (out.empty() ? U"" : sep) + word;
    word.clear();
  }
  return EncodeUtf8(out);
}

TEST_CASE("examples") {
  CleanConfig c;
  c.remove_chars = CleanConfig::CharsOf(",.");
  CHECK(CleanText("kato, pem.", c) == "kato pem");
  CHECK(CleanText("abc", CleanConfig()) == "abc");
  CHECK(CleanText("  a \t\n b  ", CleanConfig()) == "a b");
  CleanConfig keep;
  keep.collapse_whitespace = false;
  CHECK(CleanText("  a  b ", keep) == "  a  b ");
  CleanConfig lower;
  lower.lowercase = true;
  CHECK(CleanText("KATO Ŋa", lower) == "kato ŋa");
  CleanConfig nospace;
  nospace.remove_chars = {U' '};
  CHECK(CleanText("a b\tc", nospace) == "abc");
  CHECK(CleanText("", c) == "");
  CHECK(CleanText(" , . ", c) == "");
}

static std::string RandomText(std::mt19937 &rng) {
  static const char *kPieces[] = {"a", "B", "Ŋ", "ŋ", " ", "  ", "\t", ",", ".", "é", "É",
                                  "　", "ʈʂʰ", "!", "\n", "İ", "Σ"};
  std::uniform_int_distribution<int> len(0, 25), pick(0, 16);
  std::string s;
  for (int n = len(rng); n > 0; --n) s += kPieces[pick(rng)];
  return s;
}

static CleanConfig RandomConfig(std::mt19937 &rng, bool allow_lowercase) {
  static const char32_t kRemovable[] = {U',', U'.', U'!', U' ', U'b', U'ŋ', U'é'};
  CleanConfig c;
  for (char32_t ch : kRemovable)
    if (rng() % 3 == 0) c.remove_chars.insert(ch);
  c.collapse_whitespace = rng() % 4 != 0;
  c.lowercase = allow_lowercase && rng() % 2 == 0;
  return c;
}

TEST_CASE("idempotent and equal to the reference on 1000 random strings") {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::string s = RandomText(rng);
    CleanConfig c = RandomConfig(rng, true);
    std::string once = CleanText(s, c);
    CAPTURE(s);
    CHECK(CleanText(once, c) == once);
    CHECK(once == ReferenceClean(s, c));
  }
}

TEST_CASE("introduces no new characters except the collapsing space") {
  std::mt19937 rng(12);
  for (int i = 0; i < 1000; ++i) {
    std::string s = RandomText(rng);
    CleanConfig c = RandomConfig(rng, false);
    std::u32string in = DecodeUtf8(s);
    for (char32_t ch : DecodeUtf8(CleanText(s, c))) {
      CHECK(!c.remove_chars.count(ch));
      if (ch != U' ') CHECK(in.find(ch) != std::u32string::npos);
    }
  }
}

}  // namespace fieldasr
