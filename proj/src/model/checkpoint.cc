// model/checkpoint.cc

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

#include "model/checkpoint.h"

#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"

namespace fieldasr {

using nn::Tensor;

namespace {

constexpr char kMagic[4] = {'D', 'A', 'W', 'M'};

void PutBlock(std::string *out, const std::string &name, const Tensor &t) {
  PutU32(out, static_cast<uint32_t>(name.size()));
  *out += name;
  PutU32(out, static_cast<uint32_t>(t.rank()));
  for (size_t d : t.shape()) PutU32(out, static_cast<uint32_t>(d));
  for (double v : t.values()) PutF32(out, static_cast<float>(v));
}

Tensor VectorTensor(const std::vector<double> &v) { return Tensor(nn::Shape{v.size()}, v); }

}  // namespace

std::string EncodeCheckpoint(const HybridModel &model) {
  nlohmann::json vocab = nlohmann::json::array();
  for (char32_t c : model.vocab().chars()) vocab.push_back(EncodeUtf8(c));
  nlohmann::json header = {{"model", ToJson(model.config())},
                           {"features", ToJson(model.feature_config)},
                           {"vocab", vocab},
                           {"cmvn", model.cmvn.has_value()}};
  std::string header_text = header.dump();
  std::string out(kMagic, 4);
  PutU32(&out, kCheckpointVersion);
  PutU32(&out, static_cast<uint32_t>(header_text.size()));
  out += header_text;
  for (const nn::Parameter *p : model.Parameters()) PutBlock(&out, p->name, p->value);
  if (model.cmvn) {
    PutBlock(&out, "cmvn/mean", VectorTensor(model.cmvn->mean));
    PutBlock(&out, "cmvn/stddev", VectorTensor(model.cmvn->stddev));
  }
  return out;
}

HybridModel DecodeCheckpoint(std::string_view bytes) {
  if (bytes.size() < 4 && std::string_view(kMagic, 4).starts_with(bytes))
    Fail(ErrorKind::kIntegrity, "checkpoint is truncated");
  if (bytes.size() < 4 || bytes.substr(0, 4) != std::string_view(kMagic, 4))
    Fail(ErrorKind::kFormat, "not a checkpoint (bad magic)");
  ByteReader reader(bytes.substr(4));
  uint32_t version = reader.U32();
  if (version != kCheckpointVersion)
    Fail(ErrorKind::kVersion, "checkpoint version ", version, " found, expected ",
         kCheckpointVersion);
  uint32_t header_len = reader.U32();
  nlohmann::json header = nlohmann::json::parse(reader.Bytes(header_len), nullptr, false);
  if (header.is_discarded() || !header.is_object() || !header.contains("model") ||
      !header.contains("vocab") || !header["vocab"].is_array() ||
      !header.contains("cmvn") || !header["cmvn"].is_boolean())
    Fail(ErrorKind::kIntegrity, "checkpoint header is corrupt");

  std::u32string chars;
  for (const auto &entry : header["vocab"]) {
    if (!entry.is_string()) Fail(ErrorKind::kIntegrity, "vocabulary entry is not a string");
    std::u32string c = DecodeUtf8(entry.get<std::string>());
    if (c.size() != 1) Fail(ErrorKind::kIntegrity, "vocabulary entry is not one character");
    if (!chars.empty() && c[0] <= chars.back())
      Fail(ErrorKind::kIntegrity, "vocabulary is not sorted and unique");
    chars += c;
  }
  ModelConfig config;
  try {
    config = ModelConfigFromJson(header["model"]);
    config.Validate();
  } catch (const Error &e) {
    Fail(ErrorKind::kIntegrity, "checkpoint model config: ", e.what());
  }
  HybridModel model(config, CharInventory(chars));
  if (header.contains("features")) model.feature_config = FeatureConfigFromJson(header["features"]);

  std::map<std::string, nn::Parameter *> params;
  for (nn::Parameter *p : model.Parameters()) params[p->name] = p;
  std::set<std::string> seen;
  std::vector<double> mean, stddev;
  while (!reader.AtEnd()) {
    uint32_t name_len = reader.U32();
    std::string name(reader.Bytes(name_len));
    uint32_t rank = reader.U32();
    if (rank > 2) Fail(ErrorKind::kIntegrity, "block ", name, " has rank ", rank);
    nn::Shape shape;
    for (uint32_t i = 0; i < rank; ++i) shape.push_back(reader.U32());
    size_t n = nn::NumElements(shape);
    if (n * 4 > reader.Remaining()) Fail(ErrorKind::kIntegrity, "block ", name, " is truncated");
    std::vector<double> data(n);
    for (double &v : data) v = reader.F32();
    if (!seen.insert(name).second) Fail(ErrorKind::kIntegrity, "duplicate block ", name);
    if (name == "cmvn/mean") {
      mean = std::move(data);
    } else if (name == "cmvn/stddev") {
      stddev = std::move(data);
    } else {
      auto it = params.find(name);
      if (it == params.end()) Fail(ErrorKind::kIntegrity, "unexpected block ", name);
      if (it->second->value.shape() != shape)
        Fail(ErrorKind::kIntegrity, "block ", name, " has shape ", nn::ShapeToString(shape),
             ", expected ", nn::ShapeToString(it->second->value.shape()));
      it->second->value = Tensor(shape, std::move(data));
    }
  }
  for (const auto &[name, p] : params)
    if (!seen.count(name)) Fail(ErrorKind::kIntegrity, "checkpoint lacks parameter ", name);
  const bool want_cmvn = header["cmvn"].get<bool>();
  if (seen.count("cmvn/mean") != want_cmvn || seen.count("cmvn/stddev") != want_cmvn ||
      (seen.count("cmvn/mean") &&
       (mean.size() != stddev.size() || mean.size() != static_cast<size_t>(config.input_dim))))
    Fail(ErrorKind::kIntegrity, "inconsistent CMVN blocks");
  if (seen.count("cmvn/mean")) model.cmvn = CmvnStats{mean, stddev};
  return model;
}

void SaveCheckpoint(const HybridModel &model, const std::filesystem::path &path) {
  WriteFileBytes(path, EncodeCheckpoint(model));
}

HybridModel LoadCheckpoint(const std::filesystem::path &path) {
  return DecodeCheckpoint(ReadFileBytes(path));
}

}  // namespace fieldasr
