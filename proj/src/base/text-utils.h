// base/text-utils.h

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

#ifndef FIELDASR_BASE_TEXT_UTILS_H_
#define FIELDASR_BASE_TEXT_UTILS_H_

#include <string>
#include <string_view>
#include <vector>

namespace fieldasr {

// UTF-8 <-> code points. Invalid UTF-8 throws ErrorKind::kParse.
std::u32string DecodeUtf8(std::string_view utf8);
std::string EncodeUtf8(std::u32string_view text);
std::string EncodeUtf8(char32_t c);

// Unicode canonical composition (NFC), via ICU.
std::string NormalizeNfc(std::string_view utf8);

char32_t SimpleToLower(char32_t c);
bool IsUnicodeWhitespace(char32_t c);

std::vector<std::string> SplitOnSpace(std::string_view line);
std::string_view TrimAscii(std::string_view s);

// True when s is non-empty and matches [A-Za-z0-9_-]+.
bool IsSafeId(std::string_view s);
// Replaces every character outside [A-Za-z0-9_-] with '_'.
std::string SanitizeId(std::string_view s);

}  // namespace fieldasr

#endif  // FIELDASR_BASE_TEXT_UTILS_H_
