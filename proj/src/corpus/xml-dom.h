// corpus/xml-dom.h

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

#ifndef FIELDASR_CORPUS_XML_DOM_H_
#define FIELDASR_CORPUS_XML_DOM_H_

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fieldasr {

// Just enough of a DOM for the transcription formats we read. Built on expat.
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<XmlElement>> children;
  std::string text;  // character data directly inside this element
  int line = 0;

  const std::string *Attr(std::string_view key) const;
  const XmlElement *Child(std::string_view child_name) const;
  std::vector<const XmlElement *> Children(std::string_view child_name) const;
};

// Throws kParse with "line L, column C" on malformed input.
std::unique_ptr<XmlElement> ParseXml(std::string_view bytes);

std::string XmlEscape(std::string_view text);

}  // namespace fieldasr

#endif  // FIELDASR_CORPUS_XML_DOM_H_
