// ctc/char-inventory-test.cc

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

#include "base/error.h"
#include "ctc/char-inventory.h"

namespace fieldasr {

TEST_CASE("reserved indices and code-point ordering") {
  std::vector<std::string> texts = {"kato pem", "ba"};
  CharInventory inv = CharInventory::FromTexts(texts);
  // space < a < b < e < k < m < o < p < t
  CHECK(inv.size() == 3 + 9);
  CHECK(inv.IdOf(U' ') == 3);
  CHECK(inv.IdOf(U'a') == 4);
  CHECK(inv.IdOf(U't') == 11);
  CHECK(inv.Symbol(0) == "<blank>");
  CHECK(inv.Symbol(1) == "<unk>");
  CHECK(inv.Symbol(2) == "<eos>");
  CHECK(inv.Symbol(4) == "a");
}

TEST_CASE("unknown characters map to unk") {
  CharInventory inv(U"ab");
  CHECK(inv.Encode("abz") == LabelSequence{3, 4, CharInventory::kUnk});
  CHECK(inv.Decode(LabelSequence{3, 0, 2, 4, 1}) == "ab\xEF\xBF\xBD");
  CHECK_THROWS_AS(inv.CharAt(1), Error);
}

TEST_CASE("encode and decode are inverse on in-vocabulary text") {
  std::vector<std::string> texts = {"ʈʂʰɯ˧ ʁo˥"};
  CharInventory inv = CharInventory::FromTexts(texts);
  CHECK(inv.Decode(inv.Encode(texts[0])) == texts[0]);
}

}  // namespace fieldasr
