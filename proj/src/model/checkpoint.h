// model/checkpoint.h

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

#ifndef FIELDASR_MODEL_CHECKPOINT_H_
#define FIELDASR_MODEL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "model/hybrid-model.h"

namespace fieldasr {

inline constexpr uint32_t kCheckpointVersion = 1;

// Layout (little-endian):
//   "DAWM", u32 version, u32 header length, header JSON
//     {"model": {...}, "features": {...}, "vocab": ["a", "b", ...]},
//   then blocks until EOF: u32 name length, name, u32 rank, u32 dims[rank],
//   f32 payload. Parameters use their own names; CMVN stats, when present,
//   are stored as "cmvn/mean" and "cmvn/stddev".
std::string EncodeCheckpoint(const HybridModel &model);
// kFormat on bad magic, kVersion on another version, kIntegrity on
// truncation or blocks that do not match the header.
HybridModel DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const HybridModel &model, const std::filesystem::path &path);
HybridModel LoadCheckpoint(const std::filesystem::path &path);

}  // namespace fieldasr

#endif  // FIELDASR_MODEL_CHECKPOINT_H_
