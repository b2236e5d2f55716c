// corpus/elan.h

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

#ifndef FIELDASR_CORPUS_ELAN_H_
#define FIELDASR_CORPUS_ELAN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/corpus.h"

namespace fieldasr {

// One utterance per ALIGNABLE_ANNOTATION on the chosen tier. With no tier
// given, the first tier that has alignable annotations is used (none: empty
// result). Text is NFC-normalized; speaker ids are sanitized to
// [A-Za-z0-9_-], "unknown" when PARTICIPANT is missing or empty.
std::vector<Utterance> ParseElan(std::string_view doc, std::string_view recording_id,
                                 const std::optional<std::string> &tier = std::nullopt);

// Tier ids in document order.
std::vector<std::string> ElanTierIds(std::string_view doc);

// Converts a Pangloss TEXT document into an ELAN document with a single tier
// "T1" holding one annotation per S element.
std::string PanglossToElan(std::string_view doc);

// Decimal seconds ("2.5", "12", ".25") to milliseconds, round half up.
// Throws kParse on anything else.
int64_t SecondsToMs(std::string_view seconds);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_ELAN_H_
