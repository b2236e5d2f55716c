// ctc/char-inventory.h

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

#ifndef FIELDASR_CTC_CHAR_INVENTORY_H_
#define FIELDASR_CTC_CHAR_INVENTORY_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fieldasr {

// Label ids never include blank or eos; unk stands in for characters the
// inventory has not seen.
using LabelSequence = std::vector<int>;

/// Character vocabulary shared by the CTC and attention heads.
/// Index 0 = blank, 1 = unk, 2 = eos (attention only), then characters in
/// code-point order. Space is an ordinary character.
class CharInventory {
 public:
  static constexpr int kBlank = 0;
  static constexpr int kUnk = 1;
  static constexpr int kEos = 2;
  static constexpr int kFirstChar = 3;

  CharInventory() = default;
  // Deduplicates and sorts by code point.
  explicit CharInventory(std::u32string chars);
  static CharInventory FromTexts(std::span<const std::string> utf8_texts);

  int size() const { return kFirstChar + static_cast<int>(chars_.size()); }
  const std::u32string &chars() const { return chars_; }

  int IdOf(char32_t c) const;
  char32_t CharAt(int id) const;
  std::string Symbol(int id) const;

  // Characters outside the inventory map to unk.
  LabelSequence Encode(std::string_view utf8) const;
  // Drops blank and eos; unk renders as U+FFFD.
  std::string Decode(std::span<const int> ids) const;

  bool operator==(const CharInventory &other) const { return chars_ == other.chars_; }

 private:
  std::u32string chars_;
  std::map<char32_t, int> index_;
};

}  // namespace fieldasr

#endif  // FIELDASR_CTC_CHAR_INVENTORY_H_
