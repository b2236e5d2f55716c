// eval/cer.cc

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

#include "eval/cer.h"

#include <algorithm>
#include <vector>

#include "base/error.h"
#include "base/text-utils.h"

namespace fieldasr {

CerReport EditDistance(std::u32string_view ref, std::u32string_view hyp) {
  const size_t n = ref.size(), m = hyp.size();
  const size_t w = m + 1;
  std::vector<long> d((n + 1) * w);
  for (size_t j = 0; j <= m; ++j) d[j] = static_cast<long>(j);
  for (size_t i = 1; i <= n; ++i) {
    d[i * w] = static_cast<long>(i);
    for (size_t j = 1; j <= m; ++j) {
      long diag = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i * w + j] = std::min({diag, d[(i - 1) * w + j] + 1, d[i * w + j - 1] + 1});
    }
  }
  CerReport r;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    long here = d[i * w + j];
    if (i > 0 && j > 0) {
      bool same = ref[i - 1] == hyp[j - 1];
      if (d[(i - 1) * w + j - 1] + (same ? 0 : 1) == here) {
        if (!same) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && d[(i - 1) * w + j] + 1 == here) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  r.ref_chars = static_cast<long>(n);
  r.cer = n > 0 ? static_cast<double>(r.edits()) / static_cast<double>(n) : 0.0;
  return r;
}

CerReport Cer(std::string_view ref_utf8, std::string_view hyp_utf8) {
  std::u32string ref = DecodeUtf8(ref_utf8), hyp = DecodeUtf8(hyp_utf8);
  if (ref.empty() && !hyp.empty())
    Fail(ErrorKind::kUndefinedRate, "CER undefined: empty reference, hypothesis has ",
         hyp.size(), " characters");
  return EditDistance(ref, hyp);
}

CerReport CorpusCer(std::span<const TextPair> pairs) {
  CerReport total;
  for (const auto &[ref, hyp] : pairs) {
    CerReport r = EditDistance(DecodeUtf8(ref), DecodeUtf8(hyp));
    total.substitutions += r.substitutions;
    total.insertions += r.insertions;
    total.deletions += r.deletions;
    total.ref_chars += r.ref_chars;
  }
  if (total.ref_chars == 0)
    Fail(ErrorKind::kUndefinedRate, "corpus CER undefined: all ", pairs.size(),
         " references are empty");
  total.cer = static_cast<double>(total.edits()) / static_cast<double>(total.ref_chars);
  return total;
}

}  // namespace fieldasr
