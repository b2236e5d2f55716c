// eval/learning-curve.cc

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

#include "eval/learning-curve.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "base/error.h"
#include "base/text-utils.h"
#include "corpus/corpus-ops.h"
#include "eval/cer.h"
#include "model/decode.h"

namespace fieldasr {

std::vector<Example> ExamplesFor(const Corpus &corpus, std::span<const FeatureMatrix> features,
                                 const CharInventory &vocab) {
  std::map<std::string_view, const FeatureMatrix *> by_id;
  for (const FeatureMatrix &f : features) by_id[f.utterance_id] = &f;
  std::vector<Example> out;
  out.reserve(corpus.utterances.size());
  for (const Utterance &u : corpus.utterances) {
    auto it = by_id.find(u.id);
    if (it == by_id.end()) Fail(ErrorKind::kNotFound, "no features for utterance ", u.id);
    out.push_back(MakeExample(u.id, it->second->frames, u.text, vocab));
  }
  return out;
}

double DecodeCer(HybridModel &model, std::span<const Example> examples,
                 const DecodeOptions &options) {
  std::vector<TextPair> pairs;
  for (const Example &e : examples)
    pairs.emplace_back(e.text, DecodeJoint(model, e.features, options).text);
  return CorpusCer(pairs).cer;
}

std::vector<CurvePoint> LearningCurve(const Corpus &train_pool, const Corpus &dev,
                                      std::span<const FeatureMatrix> features,
                                      const std::vector<double> &minutes,
                                      const CurveSettings &settings, const LogSink &log,
                                      std::vector<Corpus> *subsets_out) {
  if (minutes.empty()) Fail(ErrorKind::kParameter, "no curve points requested");
  if (dev.utterances.empty()) Fail(ErrorKind::kSize, "learning curve needs a dev set");
  std::vector<Corpus> subsets = NestedSubsets(train_pool, minutes, settings.subset_seed);
  std::vector<std::string> texts;
  for (const Utterance &u : train_pool.utterances) texts.push_back(u.text);
  CharInventory vocab = CharInventory::FromTexts(texts);
  std::vector<Example> dev_examples = ExamplesFor(dev, features, vocab);

  std::vector<CurvePoint> points;
  for (size_t i = 0; i < subsets.size(); ++i) {
    const Corpus &subset = subsets[i];
    std::vector<Example> train = ExamplesFor(subset, features, vocab);
    HybridModel model(settings.model, vocab);
    model.Initialize(settings.train.seed);
    CurvePoint p;
    p.train_minutes = static_cast<double>(subset.TotalDurationMs()) / 60000.0;
    if (log) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "curve point %zu: %zu utterances, %.3f minutes", i + 1,
                    subset.utterances.size(), p.train_minutes);
      log(buf);
    }
    std::vector<EpochMetrics> history = Train(model, train, {}, settings.train, log);
    p.epochs_used = static_cast<int>(history.size());
    p.cer_percent = 100.0 * DecodeCer(model, dev_examples, settings.decode);
    if (log) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "curve point %zu: dev cer %.4f%%", i + 1, p.cer_percent);
      log(buf);
    }
    points.push_back(p);
  }
  if (subsets_out) *subsets_out = std::move(subsets);
  return points;
}

std::vector<ProfileRow> TrainingProfile(std::span<const EpochMetrics> history) {
  if (history.empty()) Fail(ErrorKind::kSize, "empty training history");
  std::vector<ProfileRow> rows;
  for (const EpochMetrics &m : history) rows.push_back({m.epoch, m.train_cer, m.dev_cer});
  return rows;
}

namespace {

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(std::string_view s, size_t line) {
  std::string copy(TrimAscii(s));
  if (copy == "nan") return std::nan("");
  char *end = nullptr;
  double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size())
    Fail(ErrorKind::kParse, "line ", line, ": bad number '", copy, "'");
  return v;
}

int ParseInt(std::string_view s, size_t line) {
  std::string_view t = TrimAscii(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    Fail(ErrorKind::kParse, "line ", line, ": bad integer '", std::string(t), "'");
  return v;
}

// Rows after the expected header, each split on commas into `width` fields.
std::vector<std::vector<std::string_view>> CsvRows(std::string_view csv, std::string_view header,
                                                   size_t width) {
  std::vector<std::vector<std::string_view>> rows;
  size_t pos = 0, line = 0;
  while (pos < csv.size()) {
    size_t nl = csv.find('\n', pos);
    std::string_view text = csv.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? csv.size() : nl + 1;
    ++line;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (line == 1) {
      if (text != header)
        Fail(ErrorKind::kParse, "expected header '", std::string(header), "'");
      continue;
    }
    if (text.empty()) continue;
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
      size_t comma = text.find(',', start);
      fields.push_back(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != width)
      Fail(ErrorKind::kParse, "line ", line, ": expected ", width, " fields, got ", fields.size());
    rows.push_back(std::move(fields));
  }
  if (line == 0) Fail(ErrorKind::kParse, "empty CSV");
  return rows;
}

constexpr std::string_view kProfileHeader = "epoch,train_cer,dev_cer";
constexpr std::string_view kCurveHeader = "train_minutes,cer_percent,epochs_used";

}  // namespace

std::string ProfileToCsv(std::span<const ProfileRow> rows) {
  std::string out(kProfileHeader);
  out += '\n';
  for (const ProfileRow &r : rows)
    out += std::to_string(r.epoch) + "," + Num(r.train_cer) + "," + Num(r.dev_cer) + "\n";
  return out;
}

std::vector<ProfileRow> ProfileFromCsv(std::string_view csv) {
  std::vector<ProfileRow> out;
  size_t line = 1;
  for (const auto &f : CsvRows(csv, kProfileHeader, 3)) {
    ++line;
    out.push_back({ParseInt(f[0], line), ParseDouble(f[1], line), ParseDouble(f[2], line)});
  }
  return out;
}

std::string CurveToCsv(std::span<const CurvePoint> points) {
  std::string out(kCurveHeader);
  out += '\n';
  for (const CurvePoint &p : points)
    out += Num(p.train_minutes) + "," + Num(p.cer_percent) + "," + std::to_string(p.epochs_used) +
           "\n";
  return out;
}

std::vector<CurvePoint> CurveFromCsv(std::string_view csv) {
  std::vector<CurvePoint> out;
  size_t line = 1;
  for (const auto &f : CsvRows(csv, kCurveHeader, 3)) {
    ++line;
    out.push_back({ParseDouble(f[0], line), ParseDouble(f[1], line), ParseInt(f[2], line)});
  }
  return out;
}

}  // namespace fieldasr
