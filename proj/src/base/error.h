// base/error.h

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

#ifndef FIELDASR_BASE_ERROR_H_
#define FIELDASR_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fieldasr {

enum class ErrorKind {
  kParse,         // malformed input document
  kStructure,     // well-formed but violates the expected schema
  kNotFound,
  kRange,
  kSize,
  kIo,
  kIntegrity,     // corrupt or inconsistent data (duplicates, truncation)
  kFormat,        // unsupported file format or header field
  kShape,
  kNumeric,       // NaN / Inf encountered
  kVersion,
  kParameter,
  kInfeasible,    // CTC target cannot be aligned to the input
  kInvalidLabel,
  kUndefinedRate,
  kState,         // illegal state transition or call order
};

std::string_view ErrorKindName(ErrorKind kind);

/// All recoverable failures in the library are reported through this type.
/// The kind lets callers (CLI, HTTP layer, tests) map errors without parsing
/// messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Builds the message from stream-style arguments and throws.
template <typename... Args>
[[noreturn]] void Fail(ErrorKind kind, const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  throw Error(kind, os.str());
}

}  // namespace fieldasr

#endif  // FIELDASR_BASE_ERROR_H_
