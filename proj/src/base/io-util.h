// base/io-util.h

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

#ifndef FIELDASR_BASE_IO_UTIL_H_
#define FIELDASR_BASE_IO_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fieldasr {

std::string ReadFileBytes(const std::filesystem::path &path);
// Writes through a temporary sibling and renames, so readers never observe a
// partially written file.
void WriteFileBytes(const std::filesystem::path &path, std::string_view bytes);
std::vector<std::string> ReadLines(const std::filesystem::path &path);

// Little-endian binary encoding helpers.
void PutU32(std::string *out, uint32_t v);
void PutF32(std::string *out, float v);

// Sequential reader over a byte buffer. Reading past the end throws
// ErrorKind::kIntegrity ("truncated").
class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}
  uint32_t U32();
  float F32();
  std::string_view Bytes(size_t n);
  bool AtEnd() const { return pos_ == bytes_.size(); }
  size_t Remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace fieldasr

#endif  // FIELDASR_BASE_IO_UTIL_H_
