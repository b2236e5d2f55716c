// corpus/clean-text.h

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

#ifndef FIELDASR_CORPUS_CLEAN_TEXT_H_
#define FIELDASR_CORPUS_CLEAN_TEXT_H_

#include <set>
#include <string>
#include <string_view>

#include "corpus/corpus.h"

namespace fieldasr {

struct CleanConfig {
  std::set<char32_t> remove_chars;
  bool collapse_whitespace = true;
  bool lowercase = false;

  // Every code point of a UTF-8 string goes into remove_chars.
  static std::set<char32_t> CharsOf(std::string_view utf8);
};

// Removal, then (optionally) lowercasing, then removal again in case
// lowercasing produced a removed character, then whitespace collapsing.
// Collapsing never emits a space when ' ' itself is in remove_chars, so the
// function stays idempotent.
std::string CleanText(std::string_view utf8, const CleanConfig &cfg);

// Applies CleanText to every utterance. Utterances that become empty are
// kept; callers decide.
Corpus CleanCorpus(const Corpus &corpus, const CleanConfig &cfg);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_CLEAN_TEXT_H_
