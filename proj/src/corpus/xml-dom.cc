// corpus/xml-dom.cc

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

#include "corpus/xml-dom.h"

#include <expat.h>

#include "base/error.h"

namespace fieldasr {

const std::string *XmlElement::Attr(std::string_view key) const {
  for (const auto &kv : attributes)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

const XmlElement *XmlElement::Child(std::string_view child_name) const {
  for (const auto &c : children)
    if (c->name == child_name) return c.get();
  return nullptr;
}

std::vector<const XmlElement *> XmlElement::Children(std::string_view child_name) const {
  std::vector<const XmlElement *> out;
  for (const auto &c : children)
    if (c->name == child_name) out.push_back(c.get());
  return out;
}

namespace {

struct BuildState {
  XML_Parser parser;
  std::unique_ptr<XmlElement> root;
  std::vector<XmlElement *> stack;
};

void OnStart(void *data, const XML_Char *name, const XML_Char **attrs) {
  auto *state = static_cast<BuildState *>(data);
  auto element = std::make_unique<XmlElement>();
  element->name = name;
  element->line = static_cast<int>(XML_GetCurrentLineNumber(state->parser));
  for (int i = 0; attrs[i] != nullptr; i += 2) element->attributes.emplace_back(attrs[i], attrs[i + 1]);
  XmlElement *raw = element.get();
  if (state->stack.empty())
    state->root = std::move(element);
  else
    state->stack.back()->children.push_back(std::move(element));
  state->stack.push_back(raw);
}

void OnEnd(void *data, const XML_Char *) { static_cast<BuildState *>(data)->stack.pop_back(); }

void OnText(void *data, const XML_Char *s, int len) {
  auto *state = static_cast<BuildState *>(data);
  if (!state->stack.empty()) state->stack.back()->text.append(s, static_cast<size_t>(len));
}

}  // namespace

std::unique_ptr<XmlElement> ParseXml(std::string_view bytes) {
  XML_Parser parser = XML_ParserCreate("UTF-8");
  if (parser == nullptr) Fail(ErrorKind::kParse, "could not create XML parser");
  BuildState state{parser, nullptr, {}};
  XML_SetUserData(parser, &state);
  XML_SetElementHandler(parser, OnStart, OnEnd);
  XML_SetCharacterDataHandler(parser, OnText);
  XML_Status status = XML_Parse(parser, bytes.data(), static_cast<int>(bytes.size()), 1);
  if (status != XML_STATUS_OK) {
    std::string message = XML_ErrorString(XML_GetErrorCode(parser));
    auto line = XML_GetCurrentLineNumber(parser);
    auto column = XML_GetCurrentColumnNumber(parser);
    XML_ParserFree(parser);
    Fail(ErrorKind::kParse, "malformed XML at line ", line, ", column ", column, ": ", message);
  }
  XML_ParserFree(parser);
  if (!state.root) Fail(ErrorKind::kParse, "XML document has no root element");
  return std::move(state.root);
}

std::string XmlEscape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace fieldasr
