// tests/oracles/edit-distance-oracle.h

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

// Full-table Levenshtein with an explicit backtrace, used to check the
// production scorer. Written independently of eval/cer.cc: the table is
// filled recursively with memoization, and the backtrace follows the same
// published tie order (substitution/match, then deletion, then insertion).

#ifndef FIELDASR_TESTS_ORACLES_EDIT_DISTANCE_ORACLE_H_
#define FIELDASR_TESTS_ORACLES_EDIT_DISTANCE_ORACLE_H_

#include <functional>
#include <string>
#include <vector>

namespace fieldasr {
namespace oracle {

struct EditCounts {
  long substitutions = 0;
  long insertions = 0;
  long deletions = 0;
  long total() const { return substitutions + insertions + deletions; }
};

inline EditCounts Levenshtein(const std::u32string &ref, const std::u32string &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<long>> memo(n + 1, std::vector<long>(m + 1, -1));
  std::function<long(size_t, size_t)> d = [&](size_t i, size_t j) -> long {
    if (memo[i][j] >= 0) return memo[i][j];
    long v;
    if (i == 0) {
      v = static_cast<long>(j);
    } else if (j == 0) {
      v = static_cast<long>(i);
    } else {
      long diag = d(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      long up = d(i - 1, j) + 1;
      long left = d(i, j - 1) + 1;
      v = std::min(diag, std::min(up, left));
    }
    memo[i][j] = v;
    return v;
  };
  EditCounts c;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    long here = d(i, j);
    if (i > 0 && j > 0 && d(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1) == here) {
      if (ref[i - 1] != hyp[j - 1]) ++c.substitutions;
      --i;
      --j;
    } else if (i > 0 && d(i - 1, j) + 1 == here) {
      ++c.deletions;
      --i;
    } else {
      ++c.insertions;
      --j;
    }
  }
  return c;
}

}  // namespace oracle
}  // namespace fieldasr

#endif  // FIELDASR_TESTS_ORACLES_EDIT_DISTANCE_ORACLE_H_
