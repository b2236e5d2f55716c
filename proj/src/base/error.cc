// base/error.cc

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

#include "base/error.h"

namespace fieldasr {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kStructure: return "structural error";
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kSize: return "size error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kIntegrity: return "integrity error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kNumeric: return "numeric error";
    case ErrorKind::kVersion: return "version error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kInfeasible: return "infeasible target";
    case ErrorKind::kInvalidLabel: return "invalid label";
    case ErrorKind::kUndefinedRate: return "undefined rate";
    case ErrorKind::kState: return "state error";
  }
  return "error";
}

}  // namespace fieldasr
