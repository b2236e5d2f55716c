// service/pipeline.cc

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

#include "service/pipeline.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/corpus-ops.h"
#include "ctc/ctc.h"
#include "eval/learning-curve.h"
#include "feat/wave-io.h"
#include "model/decode.h"

namespace fieldasr {

std::vector<FeatureMatrix> ComputeCorpusFeatures(const Corpus &corpus, const FeatureConfig &cfg) {
  cfg.Validate();
  std::map<std::string, std::vector<const Utterance *>> by_recording;
  for (const Utterance &u : corpus.utterances) by_recording[u.recording_id].push_back(&u);
  std::map<std::string, FeatureMatrix> by_id;
  for (const auto &[rec_id, utts] : by_recording) {
    const Recording *rec = corpus.FindRecording(rec_id);
    if (!rec) Fail(ErrorKind::kNotFound, "recording ", rec_id, " is not in the corpus");
    std::vector<double> wav = DecodeWav(ReadFileBytes(rec->path), cfg.sample_rate);
    for (const Utterance *u : utts) {
      size_t begin = static_cast<size_t>(u->start_ms) * cfg.sample_rate / 1000;
      size_t end = std::min(wav.size(), static_cast<size_t>(u->end_ms) * cfg.sample_rate / 1000);
      if (begin >= end) Fail(ErrorKind::kRange, "utterance ", u->id, " has no audio");
      try {
        by_id[u->id] =
            ComputeLogMel(std::span<const double>(wav).subspan(begin, end - begin), cfg, u->id);
      } catch (const Error &e) {
        Fail(e.kind(), "utterance ", u->id, ": ", e.what());
      }
    }
  }
  std::vector<FeatureMatrix> out;
  for (const Utterance &u : corpus.utterances) out.push_back(std::move(by_id[u.id]));
  return out;
}

nn::Tensor NormalizeFor(const HybridModel &model, const FeatureMatrix &raw) {
  return model.cmvn ? CmvnApply(raw, *model.cmvn).frames : raw.frames;
}

TrainOutcome TrainOnCorpus(const Corpus &corpus, std::span<const FeatureMatrix> features,
                           const FeatureConfig &feature_config, const TrainRequest &request,
                           const LogSink &log) {
  if (corpus.utterances.empty()) Fail(ErrorKind::kSize, "cannot train on an empty corpus");
  Corpus train = corpus, dev;
  dev.recordings = corpus.recordings;
  if (request.dev_fraction > 0.0 && corpus.utterances.size() >= 2)
    std::tie(train, dev) = SplitCorpus(corpus, request.dev_fraction, request.train.seed);

  std::vector<std::string> texts;
  for (const Utterance &u : train.utterances) texts.push_back(u.text);
  CharInventory vocab = CharInventory::FromTexts(texts);

  std::map<std::string_view, const FeatureMatrix *> by_id;
  for (const FeatureMatrix &f : features) by_id[f.utterance_id] = &f;
  std::vector<FeatureMatrix> train_raw;
  for (const Utterance &u : train.utterances) {
    auto it = by_id.find(u.id);
    if (it == by_id.end()) Fail(ErrorKind::kNotFound, "no features for utterance ", u.id);
    train_raw.push_back(*it->second);
  }
  CmvnStats stats = CmvnFit(train_raw);

  ModelConfig mc = request.model;
  mc.input_dim = static_cast<int>(train_raw.front().dim());
  mc.ctc_weight = request.train.ctc_weight;
  TrainOutcome out{HybridModel(mc, vocab), {}, train, dev};
  out.model.feature_config = feature_config;
  out.model.cmvn = stats;
  out.model.Initialize(request.train.seed);

  std::vector<FeatureMatrix> normalized;
  for (const FeatureMatrix &f : features) normalized.push_back(CmvnApply(f, stats));
  std::vector<Example> train_ex = ExamplesFor(train, normalized, vocab);
  std::vector<Example> dev_ex = ExamplesFor(dev, normalized, vocab);
  out.history = Train(out.model, train_ex, dev_ex, request.train, log);
  return out;
}

std::vector<SampleRange> DecodingWindows(size_t n, int rate, double window_s, double overlap_s) {
  if (!(window_s > overlap_s && overlap_s >= 0.0))
    Fail(ErrorKind::kParameter, "window must be longer than its overlap");
  const size_t W = static_cast<size_t>(std::llround(window_s * rate));
  const size_t S = W - static_cast<size_t>(std::llround(overlap_s * rate));
  std::vector<SampleRange> out;
  if (n <= W) return {{0, n}};
  size_t count = 1 + (n - W + S - 1) / S;
  for (size_t k = 0; k < count; ++k) out.push_back({k * S, std::min(n, k * S + W)});
  return out;
}

Transcript TranscribeSamples(HybridModel &model, std::span<const double> samples,
                             int sample_rate, const DecodeOptions &options) {
  const FeatureConfig &fc = model.feature_config;
  if (sample_rate != fc.sample_rate)
    Fail(ErrorKind::kFormat, "audio is ", sample_rate, " Hz, the model expects ",
         fc.sample_rate, " Hz");
  if (samples.size() < fc.window_samples())
    Fail(ErrorKind::kSize, "audio is shorter than one analysis window");
  std::vector<SampleRange> windows = DecodingWindows(samples.size(), sample_rate);
  const double rate = sample_rate;
  Transcript out;
  for (size_t k = 0; k < windows.size(); ++k) {
    const SampleRange &w = windows[k];
    const double start_s = w.begin / rate;
    // Stitch points: overlap midpoints with the neighbours.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    if (k > 0) lo = (windows[k - 1].end / rate + start_s) / 2.0;
    if (k + 1 < windows.size()) hi = (w.end / rate + windows[k + 1].begin / rate) / 2.0;

    std::span<const double> piece = samples.subspan(w.begin, w.end - w.begin);
    TranscriptWindow tw{start_s, w.end / rate, ""};
    if (piece.size() >= fc.window_samples()) {
      nn::Tensor feats = NormalizeFor(model, ComputeLogMel(piece, fc, "window"));
      Hypothesis hyp = DecodeJoint(model, feats, options);
      std::vector<double> times(hyp.ids.size());
      const double frame_s = static_cast<double>(fc.hop_samples()) * model.config().frame_stacking / rate;
      const double centre = fc.window_samples() / 2.0 / rate;
      bool aligned = false;
      if (!hyp.ids.empty()) {
        nn::Tape tape(false);
        nn::Tensor lp = model.Encode(tape, feats).ctc_log_probs.value();
        try {
          std::vector<size_t> frames = CtcAlign(lp, hyp.ids);
          for (size_t i = 0; i < frames.size(); ++i)
            times[i] = start_s + frames[i] * frame_s + centre;
          aligned = true;
        } catch (const Error &e) {
          if (e.kind() != ErrorKind::kInfeasible) throw;
        }
      }
      if (!aligned)
        for (size_t i = 0; i < times.size(); ++i)
          times[i] = start_s + (i + 0.5) / times.size() * (piece.size() / rate);
      LabelSequence kept;
      for (size_t i = 0; i < hyp.ids.size(); ++i)
        if (times[i] >= lo && times[i] < hi) kept.push_back(hyp.ids[i]);
      tw.text = model.vocab().Decode(kept);
    }
    out.text += tw.text;
    out.windows.push_back(std::move(tw));
  }
  return out;
}

}  // namespace fieldasr
