// feat/feature-archive.h

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

#ifndef FIELDASR_FEAT_FEATURE_ARCHIVE_H_
#define FIELDASR_FEAT_FEATURE_ARCHIVE_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "feat/logmel.h"

namespace fieldasr {

// Feature cache: a concatenation of records, each
//   u32 id length, id bytes (UTF-8), u32 T, u32 n_mels,
//   T * n_mels little-endian f32, row-major.
// Values are stored at 32-bit precision.
std::string EncodeFeatureRecord(const FeatureMatrix &features);
std::string EncodeFeatureArchive(std::span<const FeatureMatrix> features);
// Throws kIntegrity on truncated or inconsistent data.
std::vector<FeatureMatrix> DecodeFeatureArchive(std::string_view bytes);

void WriteFeatureArchive(const std::filesystem::path &path,
                         std::span<const FeatureMatrix> features);
std::vector<FeatureMatrix> ReadFeatureArchive(const std::filesystem::path &path);

}  // namespace fieldasr

#endif  // FIELDASR_FEAT_FEATURE_ARCHIVE_H_
