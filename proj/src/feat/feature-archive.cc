// feat/feature-archive.cc

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

#include "feat/feature-archive.h"

#include "base/error.h"
#include "base/io-util.h"

namespace fieldasr {

std::string EncodeFeatureRecord(const FeatureMatrix &features) {
  std::string out;
  PutU32(&out, static_cast<uint32_t>(features.utterance_id.size()));
  out += features.utterance_id;
  PutU32(&out, static_cast<uint32_t>(features.num_frames()));
  PutU32(&out, static_cast<uint32_t>(features.dim()));
  for (double v : features.frames.values()) PutF32(&out, static_cast<float>(v));
  return out;
}

std::string EncodeFeatureArchive(std::span<const FeatureMatrix> features) {
  std::string out;
  for (const FeatureMatrix &f : features) out += EncodeFeatureRecord(f);
  return out;
}

std::vector<FeatureMatrix> DecodeFeatureArchive(std::string_view bytes) {
  ByteReader reader(bytes);
  std::vector<FeatureMatrix> out;
  while (!reader.AtEnd()) {
    FeatureMatrix f;
    uint32_t id_len = reader.U32();
    f.utterance_id = std::string(reader.Bytes(id_len));
    uint32_t frames = reader.U32(), dim = reader.U32();
    if (static_cast<uint64_t>(frames) * dim * 4 > reader.Remaining())
      Fail(ErrorKind::kIntegrity, "feature record ", f.utterance_id, " is truncated");
    f.frames = nn::Tensor::Zeros(frames, dim);
    for (size_t i = 0; i < f.frames.size(); ++i) f.frames[i] = reader.F32();
    out.push_back(std::move(f));
  }
  return out;
}

void WriteFeatureArchive(const std::filesystem::path &path,
                         std::span<const FeatureMatrix> features) {
  WriteFileBytes(path, EncodeFeatureArchive(features));
}

std::vector<FeatureMatrix> ReadFeatureArchive(const std::filesystem::path &path) {
  return DecodeFeatureArchive(ReadFileBytes(path));
}

}  // namespace fieldasr
