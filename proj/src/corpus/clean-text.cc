// corpus/clean-text.cc

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

#include "corpus/clean-text.h"

#include "base/text-utils.h"

namespace fieldasr {

std::set<char32_t> CleanConfig::CharsOf(std::string_view utf8) {
  std::u32string cps = DecodeUtf8(utf8);
  return {cps.begin(), cps.end()};
}

std::string CleanText(std::string_view utf8, const CleanConfig &cfg) {
  auto removed = [&](char32_t c) { return cfg.remove_chars.count(c) > 0; };
  std::u32string text;
  for (char32_t c : DecodeUtf8(utf8)) {
    if (removed(c)) continue;
    if (cfg.lowercase) {
      c = SimpleToLower(c);
      if (removed(c)) continue;
    }
    text.push_back(c);
  }
  if (!cfg.collapse_whitespace) return EncodeUtf8(text);

  const bool keep_space = !removed(U' ');
  std::u32string out;
  bool pending = false;
  for (char32_t c : text) {
    if (IsUnicodeWhitespace(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty() && keep_space) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return EncodeUtf8(out);
}

Corpus CleanCorpus(const Corpus &corpus, const CleanConfig &cfg) {
  Corpus out = corpus;
  for (Utterance &u : out.utterances) u.text = CleanText(u.text, cfg);
  return out;
}

}  // namespace fieldasr
