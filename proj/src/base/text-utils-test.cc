// base/text-utils-test.cc

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
#include "base/text-utils.h"

namespace fieldasr {

TEST_CASE("utf8 round trip over mixed scripts") {
  std::string s = "kato ʈʂʰ 你好 \xF0\x9F\x8E\xA4";
  std::u32string cps = DecodeUtf8(s);
  CHECK(cps.size() == 13);
  CHECK(EncodeUtf8(cps) == s);
}

TEST_CASE("invalid utf8 is a parse error") {
  for (std::string bad : {std::string("\xC3"), std::string("\xFF"),
                          std::string("\xE2\x28\xA1"), std::string("\xC0\xAF")}) {
    try {
      DecodeUtf8(bad);
      FAIL("expected throw");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::kParse);
    }
  }
}

TEST_CASE("nfc composes combining sequences") {
  CHECK(NormalizeNfc("e\xCC\x81") == "\xC3\xA9");
  CHECK(NormalizeNfc("abc") == "abc");
}

TEST_CASE("simple lowercase and whitespace classes") {
  CHECK(SimpleToLower(U'A') == U'a');
  CHECK(SimpleToLower(U'Ж') == U'ж');
  CHECK(SimpleToLower(U'a') == U'a');
  CHECK(IsUnicodeWhitespace(U' '));
  CHECK(IsUnicodeWhitespace(U'　'));
  CHECK_FALSE(IsUnicodeWhitespace(U'x'));
}

TEST_CASE("safe ids") {
  CHECK(IsSafeId("spk1-rec_1"));
  CHECK_FALSE(IsSafeId(""));
  CHECK_FALSE(IsSafeId("a b"));
  CHECK(SanitizeId("Speaker A.1") == "Speaker_A_1");
}

}  // namespace fieldasr
