// base/seeded-random.h

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

#ifndef FIELDASR_BASE_SEEDED_RANDOM_H_
#define FIELDASR_BASE_SEEDED_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace fieldasr {

// Helpers built directly on mt19937_64 output, so results do not depend on
// the standard library's distribution implementations.

// Uniform in [0, 1) with 53 random bits.
inline double UniformUnit(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n), n > 0.
uint64_t UniformIndex(std::mt19937_64 &rng, uint64_t n);

// Standard normal via Box-Muller.
double StandardNormal(std::mt19937_64 &rng);

// Fisher-Yates permutation of 0..n-1.
std::vector<size_t> SeededPermutation(size_t n, uint64_t seed);

}  // namespace fieldasr

#endif  // FIELDASR_BASE_SEEDED_RANDOM_H_
