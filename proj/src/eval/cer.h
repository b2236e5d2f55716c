// eval/cer.h

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

#ifndef FIELDASR_EVAL_CER_H_
#define FIELDASR_EVAL_CER_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace fieldasr {

struct CerReport {
  long substitutions = 0;
  long insertions = 0;
  long deletions = 0;
  long ref_chars = 0;
  double cer = 0.0;  // edits / ref_chars

  long edits() const { return substitutions + insertions + deletions; }
};

// Unit-cost Levenshtein over code points (spaces included). The counts come
// from one optimal alignment; on the backtrace a diagonal step is preferred
// to a deletion, and a deletion to an insertion.
CerReport EditDistance(std::u32string_view ref, std::u32string_view hyp);

// Throws kUndefinedRate for an empty reference with a non-empty hypothesis.
CerReport Cer(std::string_view ref_utf8, std::string_view hyp_utf8);

using TextPair = std::pair<std::string, std::string>;  // (reference, hypothesis)

// Micro average: all edits over all reference characters. Throws
// kUndefinedRate when every reference is empty.
CerReport CorpusCer(std::span<const TextPair> pairs);

}  // namespace fieldasr

#endif  // FIELDASR_EVAL_CER_H_
