// ctc/char-inventory.cc

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

#include "ctc/char-inventory.h"

#include <algorithm>

#include "base/error.h"
#include "base/text-utils.h"

namespace fieldasr {

CharInventory::CharInventory(std::u32string chars) : chars_(std::move(chars)) {
  std::sort(chars_.begin(), chars_.end());
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
  for (size_t i = 0; i < chars_.size(); ++i)
    index_[chars_[i]] = kFirstChar + static_cast<int>(i);
}

CharInventory CharInventory::FromTexts(std::span<const std::string> utf8_texts) {
  std::u32string all;
  for (const std::string &t : utf8_texts) all += DecodeUtf8(t);
  return CharInventory(std::move(all));
}

int CharInventory::IdOf(char32_t c) const {
  auto it = index_.find(c);
  return it == index_.end() ? kUnk : it->second;
}

char32_t CharInventory::CharAt(int id) const {
  if (id < kFirstChar || id >= size())
    Fail(ErrorKind::kInvalidLabel, "label ", id, " is not a character id");
  return chars_[id - kFirstChar];
}

std::string CharInventory::Symbol(int id) const {
  switch (id) {
    case kBlank: return "<blank>";
    case kUnk: return "<unk>";
    case kEos: return "<eos>";
    default: return EncodeUtf8(CharAt(id));
  }
}

LabelSequence CharInventory::Encode(std::string_view utf8) const {
  LabelSequence ids;
  for (char32_t c : DecodeUtf8(utf8)) ids.push_back(IdOf(c));
  return ids;
}

std::string CharInventory::Decode(std::span<const int> ids) const {
  std::u32string out;
  for (int id : ids) {
    if (id == kBlank || id == kEos) continue;
    out.push_back(id == kUnk ? U'�' : CharAt(id));
  }
  return EncodeUtf8(out);
}

}  // namespace fieldasr
