// tests/acceptance.cc

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

// Acceptance run: one PASS or FAIL line per criterion, exit status 1 if any
// criterion fails. Arguments, when given, select criteria by name substring.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/elan.h"
#include "corpus/ingest.h"
#include "corpus/kaldi-dir.h"
#include "ctc-oracle.h"
#include "ctc/ctc.h"
#include "edit-distance-oracle.h"
#include "eval/cer.h"
#include "eval/learning-curve.h"
#include "eval/synth.h"
#include "feat/wave-io.h"
#include "model/checkpoint.h"
#include "model/decode.h"
#include "model/hybrid-loss.h"
#include "model/hybrid-model.h"
#include "nn/gradient-check.h"
#include "nn/lstm.h"
#include "nn/ops.h"
#include "random-corpus.h"
#include "service/http-api.h"
#include "service/service.h"

namespace fieldasr {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nn::Shape;
using nn::Tensor;
using nn::Var;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char *fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

fs::path Scratch(const std::string &name) {
  fs::path d = fs::temp_directory_path() / ("fieldasr-acceptance-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Tensor RandomTensor(Shape shape, std::mt19937_64 &rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(shape);
  for (size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

// ---------------------------------------------------------------- CTC

Outcome CtcOracle() {
  std::mt19937_64 rng(500);
  std::normal_distribution<double> n(0.0, 2.0);
  double worst_loss = 0.0, worst_grad = 0.0;
  int lattices = 0, infeasible_ok = 0, infeasible = 0;
  while (lattices < 500) {
    size_t T = 1 + rng() % 6;
    int V = 2 + static_cast<int>(rng() % 2);  // blank plus 1 or 2 labels
    Tensor lp(Shape{T, static_cast<size_t>(V)});
    for (size_t i = 0; i < lp.size(); ++i) lp[i] = n(rng);
    nn::LogSoftmaxRowsInPlace(&lp);
    std::vector<int> target(rng() % 4);
    for (int &x : target) x = 1 + static_cast<int>(rng() % (V - 1));
    double p = oracle::TargetProbability(lp, target);
    if (p == 0.0) {
      ++infeasible;
      try {
        CtcLoss(lp, target);
      } catch (const Error &e) {
        infeasible_ok += e.kind() == ErrorKind::kInfeasible;
      }
      continue;
    }
    CtcResult r = CtcLoss(lp, target);
    double ref = -std::log(p);
    worst_loss = std::max(worst_loss, std::abs(r.loss - ref) / std::max(std::abs(ref), 1e-300));
    // loss == 0 only for p == 1; relative error then falls back to absolute.
    if (ref == 0.0) worst_loss = std::max(worst_loss, std::abs(r.loss));
    Tensor g = oracle::TargetGradient(lp, target);
    for (size_t i = 0; i < g.size(); ++i)
      worst_grad = std::max(worst_grad, std::abs(r.grad[i] - g[i]) / std::max(std::abs(g[i]), 1e-12));
    ++lattices;
  }
  return {worst_loss < 1e-9 && worst_grad < 1e-9 && infeasible_ok == infeasible,
          Fmt("%d lattices (T<=6, V<=3, |target|<=3), max rel loss err %.2e, max rel grad err "
              "%.2e; %d/%d infeasible targets rejected",
              lattices, worst_loss, worst_grad, infeasible_ok, infeasible)};
}

// ---------------------------------------------------------------- gradients

Var Contract(Var y, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return nn::Sum(nn::Mul(y, y.tape()->Constant(RandomTensor(y.shape(), rng))));
}

ModelConfig Miniature() {
  ModelConfig c;
  c.input_dim = 3;
  c.encoder_layers = 2;
  c.hidden_size = 4;
  c.decoder_hidden = 4;
  c.attention_dim = 4;
  return c;
}

HybridModel ScrambledMiniature(uint64_t seed) {
  HybridModel m(Miniature(), CharInventory(U"ab"));  // V = 5 with blank, unk, eos
  m.Initialize(seed);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (nn::Parameter *p : m.Parameters())
    for (size_t i = 0; i < p->value.size(); ++i) p->value[i] = u(rng);
  return m;
}

Outcome GradientSuite() {
  using nn::CheckInputGradients;
  using nn::InputLossFn;
  std::mt19937_64 rng(7);
  auto r34 = [&] { return RandomTensor({3, 4}, rng); };
  struct Row {
    std::string name;
    nn::GradCheckResult r;
    double tol;
  };
  std::vector<Row> rows;
  auto op = [&](const std::string &name, const InputLossFn &fn, std::vector<Tensor> in) {
    rows.push_back({name, CheckInputGradients(fn, std::move(in)), 1e-6});
  };
  using S = std::span<const Var>;
  op("matmul", [](nn::Tape &, S v) { return Contract(nn::MatMul(v[0], v[1]), 1); },
     {r34(), RandomTensor({4, 3}, rng)});
  op("add", [](nn::Tape &, S v) { return Contract(nn::Add(v[0], v[1]), 2); }, {r34(), r34()});
  op("add-broadcast", [](nn::Tape &, S v) { return Contract(nn::Add(v[0], v[1]), 3); },
     {r34(), RandomTensor({1, 4}, rng)});
  op("sub", [](nn::Tape &, S v) { return Contract(nn::Sub(v[0], v[1]), 4); }, {r34(), r34()});
  op("mul", [](nn::Tape &, S v) { return Contract(nn::Mul(v[0], v[1]), 5); }, {r34(), r34()});
  op("scale", [](nn::Tape &, S v) { return Contract(nn::Scale(v[0], -2.5), 6); }, {r34()});
  op("tanh", [](nn::Tape &, S v) { return Contract(nn::Tanh(v[0]), 7); }, {r34()});
  op("sigmoid", [](nn::Tape &, S v) { return Contract(nn::Sigmoid(v[0]), 8); }, {r34()});
  for (int axis : {0, 1}) {
    op("softmax" + std::to_string(axis),
       [axis](nn::Tape &, S v) { return Contract(nn::Softmax(v[0], axis), 9); }, {r34()});
    op("log_softmax" + std::to_string(axis),
       [axis](nn::Tape &, S v) { return Contract(nn::LogSoftmax(v[0], axis), 10); }, {r34()});
  }
  op("concat0", [](nn::Tape &, S v) {
    Var p[] = {v[0], v[1]};
    return Contract(nn::Concat(p, 0), 11);
  }, {r34(), RandomTensor({2, 4}, rng)});
  op("concat1", [](nn::Tape &, S v) {
    Var p[] = {v[0], v[1]};
    return Contract(nn::Concat(p, 1), 12);
  }, {r34(), RandomTensor({3, 2}, rng)});
  op("slice", [](nn::Tape &, S v) { return Contract(nn::Slice(v[0], 1, 1, 4), 13); }, {r34()});
  op("transpose", [](nn::Tape &, S v) { return Contract(nn::Transpose(v[0]), 14); }, {r34()});
  op("embedding", [](nn::Tape &, S v) {
    int ids[] = {2, 0, 2, 1};
    return Contract(nn::EmbeddingLookup(v[0], ids), 15);
  }, {r34()});
  op("cross_entropy", [](nn::Tape &, S v) {
    int t[] = {1, -1, 3};
    return nn::CrossEntropy(v[0], t, -1);
  }, {r34()});
  op("sum", [](nn::Tape &, S v) { return nn::Scale(nn::Sum(v[0]), 3.0); }, {r34()});

  // LSTM cell with every operand as an input.
  rows.push_back({"lstm_cell", CheckInputGradients([](nn::Tape &, S v) {
    nn::LstmState s = nn::LstmCell(v[0], {v[1], v[2]}, v[3], v[4], v[5]);
    return nn::Add(Contract(s.h, 16), Contract(s.c, 17));
  }, {RandomTensor({1, 3}, rng), RandomTensor({1, 2}, rng), RandomTensor({1, 2}, rng),
      RandomTensor({3, 8}, rng), RandomTensor({2, 8}, rng), RandomTensor({1, 8}, rng)}), 1e-5});

  // BiLSTM layer: parameters and input sequence.
  nn::BiLstmParams bp = nn::MakeBiLstmParams("enc", 3, 2);
  std::vector<nn::Parameter *> bparams;
  bp.Collect(&bparams);
  for (nn::Parameter *q : bparams) q->value = RandomTensor(q->value.shape(), rng);
  Tensor seq = RandomTensor({3, 3}, rng);
  auto bloss = [&](nn::Tape &tape, Var in) { return Contract(nn::BiLstmLayer(tape, in, bp), 18); };
  rows.push_back({"bilstm_params", nn::CheckParameterGradients(
      [&](nn::Tape &t) { return bloss(t, t.Constant(seq)); }, bparams), 1e-5});
  rows.push_back({"bilstm_input", CheckInputGradients(
      [&](nn::Tape &t, S v) { return bloss(t, v[0]); }, {seq}), 1e-5});

  // CTC loss through log-softmax.
  std::vector<int> target = {1, 2, 2};
  rows.push_back({"ctc_loss", CheckInputGradients([&](nn::Tape &, S v) {
    return CtcLossOp(nn::LogSoftmax(v[0], 1), target);
  }, {RandomTensor({6, 3}, rng, -2, 2)}), 1e-5});

  // Attention decoder step.
  HybridModel m = ScrambledMiniature(41);
  std::vector<nn::Parameter *> params = m.Parameters();
  Tensor states = RandomTensor({6, 8}, rng);
  auto step = [&](nn::Tape &tape, Var enc) {
    HybridModel::AttentionMemory mem = m.PrepareAttention(tape, enc);
    HybridModel::DecoderState s = m.InitialDecoderState(tape);
    auto [s1, l1] = m.DecoderStep(tape, mem, s, CharInventory::kEos);
    auto [s2, l2] = m.DecoderStep(tape, mem, s1, 3);
    return nn::Add(Contract(l1, 19), Contract(nn::Tanh(l2), 20));
  };
  rows.push_back({"decoder_step_params", nn::CheckParameterGradients(
      [&](nn::Tape &t) { return step(t, t.Constant(states)); }, params), 1e-5});
  rows.push_back({"decoder_step_input", CheckInputGradients(
      [&](nn::Tape &t, S v) { return step(t, v[0]); }, {states}), 1e-5});

  // Hybrid loss, H=4, V=5, T=6. Step 1e-4: some attention gradients are
  // ~1e-7 and a 1e-5 step leaves them in roundoff.
  HybridModel hm = ScrambledMiniature(31);
  std::vector<nn::Parameter *> hparams = hm.Parameters();
  Tensor feats = RandomTensor({6, 3}, rng, -2, 2);
  LabelSequence tgt = {3, 4, 4};
  for (double lambda : {0.0, 0.5, 1.0})
    rows.push_back({Fmt("hybrid_loss(lambda=%.1f)", lambda), nn::CheckParameterGradients(
        [&](nn::Tape &t) { return HybridLoss(t, hm, feats, tgt, lambda).loss; }, hparams, 1e-4),
        1e-5});

  bool pass = true;
  double worst_elem = 0, worst_other = 0;
  std::string failures;
  size_t checked = 0;
  for (const Row &row : rows) {
    bool ok = row.r.checked > 0 && row.r.max_rel_error < row.tol;
    pass = pass && ok;
    checked += row.r.checked;
    (row.tol < 1e-5 ? worst_elem : worst_other) =
        std::max(row.tol < 1e-5 ? worst_elem : worst_other, row.r.max_rel_error);
    if (!ok) failures += " " + row.name + " (" + row.r.worst + ")";
  }
  return {pass, Fmt("%zu checks, %zu coordinates; elementary ops max rel err %.2e (< 1e-6), "
                    "composite max rel err %.2e (< 1e-5)",
                    rows.size(), checked, worst_elem, worst_other) + failures};
}

// ---------------------------------------------------------------- CER

Outcome CerOracle() {
  std::mt19937_64 rng(1000);
  const std::u32string alphabet = U"abcə˧ ʈʂ";
  auto random = [&] {
    std::u32string s(rng() % 31, U' ');
    for (char32_t &c : s) c = alphabet[rng() % alphabet.size()];
    return s;
  };
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::u32string r = random(), h = random();
    CerReport got = EditDistance(r, h);
    oracle::EditCounts want = oracle::Levenshtein(r, h);
    bool same = got.substitutions == want.substitutions && got.insertions == want.insertions &&
                got.deletions == want.deletions && got.ref_chars == static_cast<long>(r.size());
    if (!r.empty()) {
      CerReport viaUtf8 = Cer(EncodeUtf8(r), EncodeUtf8(h));
      same = same && viaUtf8.edits() == want.total() &&
             viaUtf8.cer == static_cast<double>(want.total()) / r.size();
    }
    mismatches += !same;
  }
  return {mismatches == 0, Fmt("1000 pairs (lengths <= 30), %d count mismatches", mismatches)};
}

// ---------------------------------------------------------------- overfit

Outcome Overfit() {
  SynthSpec s;
  s.alphabet = U"abcde";
  s.num_utterances = 8;
  s.noise_sigma = 0.05;
  s.seed = 42;
  SynthCorpus sc = MakeSynthCorpus(s);
  std::vector<std::string> texts;
  for (const Utterance &u : sc.corpus.utterances) texts.push_back(u.text);
  CharInventory vocab = CharInventory::FromTexts(texts);
  std::vector<Example> ex = ExamplesFor(sc.corpus, sc.features, vocab);
  ModelConfig mc;
  mc.encoder_layers = 2;
  mc.hidden_size = 32;
  mc.decoder_hidden = 32;
  mc.attention_dim = 32;
  HybridModel m(mc, vocab);
  m.Initialize(42);
  TrainConfig tc;
  tc.epochs = 200;
  tc.batch_utterances = 1;
  tc.seed = 42;
  double initial = MeanLoss(m, ex, tc.ctc_weight);
  std::vector<EpochMetrics> h = Train(m, ex, {}, tc);
  double final_loss = MeanLoss(m, ex, tc.ctc_weight);
  double joint = DecodeCer(m, ex, DecodeOptions());
  bool pass = h.size() == 200 && h.back().train_cer == 0.0 && joint == 0.0 &&
              final_loss < 0.1 * initial;
  return {pass, Fmt("8 utterances, H=32, 2 encoder layers, 200 epochs, batch 1: train CER "
                    "greedy %.2f%%, joint beam %.2f%%; loss %.4f -> %.4f (ratio %.4f < 0.1)",
                    100 * h.back().train_cer, 100 * joint, initial, final_loss,
                    final_loss / initial)};
}

// ---------------------------------------------------------------- learning curve

Outcome Curve() {
  SynthSpec s;
  s.alphabet = U"abcde";
  s.num_utterances = 140;
  s.min_chars = 40;
  s.max_chars = 60;
  s.template_frames_per_char = 10;
  s.noise_sigma = 0.1;
  s.seed = 42;
  SynthCorpus sc = MakeSynthCorpus(s);
  Corpus pool, dev;
  for (size_t i = 0; i < sc.corpus.utterances.size(); ++i) {
    Corpus &c = i < 120 ? pool : dev;
    c.utterances.push_back(sc.corpus.utterances[i]);
    c.recordings.push_back(*sc.corpus.FindRecording(sc.corpus.utterances[i].recording_id));
  }
  double total = pool.TotalDurationMs() / 60000.0;
  CurveSettings cs;
  cs.model.encoder_layers = 2;
  cs.model.hidden_size = 32;
  cs.model.decoder_hidden = 32;
  cs.model.attention_dim = 32;
  cs.train.epochs = 20;
  cs.train.batch_utterances = 1;
  cs.train.seed = 42;
  cs.subset_seed = 42;
  std::vector<Corpus> subsets;
  std::vector<CurvePoint> pts =
      LearningCurve(pool, dev, sc.features, {0.1 * total, 0.3 * total, total}, cs, nullptr, &subsets);
  bool nested = subsets.size() == 3;
  for (size_t k = 0; nested && k + 1 < subsets.size(); ++k) {
    std::set<std::string> bigger;
    for (const Utterance &u : subsets[k + 1].utterances) bigger.insert(u.id);
    for (const Utterance &u : subsets[k].utterances) nested = nested && bigger.count(u.id);
    nested = nested && subsets[k].utterances.size() < subsets[k + 1].utterances.size();
  }
  bool epochs_ok = true;
  for (const CurvePoint &p : pts) epochs_ok = epochs_ok && p.epochs_used == 20;
  bool pass = pts.size() == 3 && nested && epochs_ok && pts[2].cer_percent < pts[0].cer_percent;
  std::string detail = Fmt("120-utterance pool (%.2f synthetic min), 20 dev utterances, 20 epochs "
                           "per point; subsets nested: %s; dev CER",
                           total, nested ? "yes" : "NO");
  for (const CurvePoint &p : pts) detail += Fmt(" %.2f min: %.2f%%;", p.train_minutes, p.cer_percent);
  return {pass, detail};
}

// ---------------------------------------------------------------- round trips

// Every field the Kaldi files carry. Genre has no Kaldi file.
bool SameInKaldiFields(const Corpus &a, const Corpus &b) {
  if (a.utterances.size() != b.utterances.size()) return false;
  for (const Recording &r : a.recordings) {
    const Recording *q = b.FindRecording(r.id);
    bool used = false;
    for (const Utterance &u : a.utterances) used = used || u.recording_id == r.id;
    if (used && (q == nullptr || q->path != r.path)) return false;
  }
  std::map<std::string, const Utterance *> by;
  for (const Utterance &u : b.utterances) by[u.id] = &u;
  for (const Utterance &u : a.utterances) {
    auto it = by.find(u.id);
    if (it == by.end()) return false;
    const Utterance &v = *it->second;
    if (u.recording_id != v.recording_id || u.speaker_id != v.speaker_id || u.text != v.text ||
        u.start_ms != v.start_ms || u.end_ms != v.end_ms)
      return false;
  }
  return true;
}

Outcome RoundTrips() {
  fs::path dir = Scratch("roundtrip");
  // Kaldi data directories.
  std::mt19937 rng(50);
  int kaldi_ok = 0;
  for (int i = 0; i < 50; ++i) {
    Corpus c = oracle::RandomCorpus(rng);
    fs::remove_all(dir / "kaldi");
    WriteKaldiDir(c, dir / "kaldi");
    kaldi_ok += SameInKaldiFields(c, ReadKaldiDir(dir / "kaldi"));
  }
  // Checkpoints: the saved model against the one read back.
  ModelConfig mc;
  mc.input_dim = 4;
  mc.encoder_layers = 2;
  mc.hidden_size = 6;
  mc.decoder_hidden = 6;
  mc.attention_dim = 6;
  HybridModel m(mc, CharInventory(U"abc"));
  m.Initialize(5);
  SaveCheckpoint(m, dir / "m.ckpt");
  HybridModel back = LoadCheckpoint(dir / "m.ckpt");
  std::mt19937_64 r64(6);
  int ckpt_ok = 0;
  for (int i = 0; i < 20; ++i) {
    Tensor f = RandomTensor({static_cast<size_t>(4 + i), 4}, r64, -2, 2);
    ckpt_ok += DecodeJoint(m, f).text == DecodeJoint(back, f).text;
  }
  // Pangloss and ELAN fixtures ingest to the same utterance.
  fs::path fixtures = FIELDASR_FIXTURE_DIR;
  std::vector<double> silence(48000, 0.0);
  WriteWavFile(dir / "a.wav", silence, 16000);
  auto ingest = [&](const std::string &file) {
    IngestResult r = BuildCorpus({{"a" + fs::path(file).extension().string(),
                                   ReadFileBytes(fixtures / file)}},
                                 {{"a", dir / "a.wav"}}, IngestOptions());
    return r.problems.empty() ? r.corpus : Corpus();
  };
  Corpus via_pangloss = ingest("fixture-pangloss.xml"), via_elan = ingest("fixture.eaf");
  bool same_text = via_pangloss.utterances.size() == 1 && via_elan.utterances.size() == 1 &&
                   via_pangloss.utterances[0].text == via_elan.utterances[0].text &&
                   via_pangloss.utterances[0].start_ms == via_elan.utterances[0].start_ms &&
                   via_pangloss.utterances[0].end_ms == via_elan.utterances[0].end_ms;
  std::vector<Utterance> three = ParseElan(PanglossToElan(ReadFileBytes(fixtures / "three-segments.xml")), "r");
  bool three_ok = three.size() == 3 && three[0].start_ms == 250 && three[2].end_ms == 4123 &&
                  three[1].text == "a < b";
  fs::remove_all(dir);
  return {kaldi_ok == 50 && ckpt_ok == 20 && same_text && three_ok,
          Fmt("kaldi-dir identity %d/50 (ids, recordings, speakers, times, text); checkpoint transcriptions identical %d/20; "
              "pangloss fixture = eaf fixture: %s; three-segment pangloss: %s",
              kaldi_ok, ckpt_ok, same_text ? "yes" : "NO", three_ok ? "yes" : "NO")};
}

// ---------------------------------------------------------------- defaults

Outcome Defaults() {
  // "a 3-layer BiLSTM encoder and a single layer decoder", "a hidden size of
  // 320", "an equal weighting between the CTC and attention objectives",
  // "a batch length of 30", "the Adadelta gradient descent algorithm",
  // "trained for 20 epochs". Adadelta rho and epsilon are the algorithm's
  // published defaults.
  ModelConfig m;
  TrainConfig t;
  json mj = ToJson(m), tj = ToJson(t);
  bool pass = m.encoder_layers == 3 && m.hidden_size == 320 && m.decoder_layers == 1 &&
              m.ctc_weight == 0.5 && t.ctc_weight == 0.5 && t.batch_utterances == 30 &&
              t.adadelta_rho == 0.95 && t.adadelta_epsilon == 1e-8 && t.epochs == 20;
  // The same values reach a model created through the service with no overrides.
  fs::path dir = Scratch("defaults");
  {
    ServiceOptions o;
    o.state_dir = dir;
    o.run_jobs = false;
    Service svc(o);
    std::vector<double> silence(48000, 0.0);
    json ds = svc.CreateDataset({{"fixture.eaf", ReadFileBytes(fs::path(FIELDASR_FIXTURE_DIR) / "fixture.eaf")},
                                 {"fixture.wav", EncodeWav(silence, 16000)}},
                                json::object());
    json model = svc.CreateModel({{"dataset_id", ds["id"]}});
    pass = pass && model["model"] == mj && model["train"]["epochs"] == 20 &&
           model["train"]["batch_utterances"] == 30 && model["train"]["ctc_weight"] == 0.5 &&
           model["train"]["adadelta_rho"] == 0.95 && model["train"]["adadelta_epsilon"] == 1e-8;
  }
  fs::remove_all(dir);
  return {pass, "model " + mj.dump() + "; train " + tj.dump()};
}

// ---------------------------------------------------------------- service

std::vector<UploadedFile> SynthUploads(int n, uint64_t seed, const fs::path &tmp) {
  SynthAudioSpec spec;
  spec.alphabet = U"abc";
  spec.num_utterances = n;
  spec.seed = seed;
  std::vector<UploadedFile> files;
  for (const std::string &stem : WriteSynthAudioCorpus(spec, tmp.string())) {
    files.push_back({stem + ".wav", ReadFileBytes(tmp / (stem + ".wav"))});
    files.push_back({stem + ".eaf", ReadFileBytes(tmp / (stem + ".eaf"))});
  }
  return files;
}

json TinyModel(const std::string &dataset, int epochs) {
  return {{"dataset_id", dataset},
          {"model", {{"encoder_layers", 1}, {"hidden_size", 8}, {"decoder_hidden", 8},
                     {"attention_dim", 8}}},
          {"train", {{"epochs", epochs}, {"batch_utterances", 1}, {"seed", 3}}},
          {"dev_fraction", 0.2}};
}

// Reads "seq n text" lines from the log stream, dropping the connection after
// max_lines lines. completed is false when the client hung up.
struct StreamRead {
  std::vector<std::pair<size_t, std::string>> lines;
  bool completed = false;
};

StreamRead ReadStream(httplib::Client &c, const std::string &job, size_t from, size_t max_lines) {
  StreamRead out;
  std::string buf;
  auto res = c.Get("/jobs/" + job + "/logs?from=" + std::to_string(from),
                   [&](const char *data, size_t n) {
                     buf.append(data, n);
                     size_t nl;
                     while ((nl = buf.find('\n')) != std::string::npos) {
                       std::string line = buf.substr(0, nl);
                       buf.erase(0, nl + 1);
                       size_t sp = line.find(' ', 4);
                       out.lines.emplace_back(std::stoul(line.substr(4, sp - 4)), line.substr(sp + 1));
                       if (out.lines.size() == max_lines) return false;
                     }
                     return true;
                   });
  out.completed = static_cast<bool>(res) && res->status == 200;
  return out;
}

Outcome ServiceStateMachine() {
  fs::path dir = Scratch("service");
  fs::path tmp = Scratch("service-audio");
  std::mutex mu;
  std::map<std::string, std::vector<std::pair<JobState, JobState>>> transitions;
  std::atomic<int> fail_at{-1}, calls{0};
  std::atomic<bool> slow{false};
  ServiceOptions opt;
  opt.state_dir = dir;
  opt.on_transition = [&](const std::string &id, JobState a, JobState b) {
    std::lock_guard<std::mutex> lock(mu);
    transitions[id].emplace_back(a, b);
  };
  opt.on_log = [&](const std::string &, const std::string &) {
    if (calls++ == fail_at) Fail(ErrorKind::kNumeric, "induced failure");
    if (slow) std::this_thread::sleep_for(std::chrono::milliseconds(4));
  };
  Service service(opt);
  httplib::Server server;
  RegisterRoutes(server, service);
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  json ds = service.CreateDataset(SynthUploads(6, 5, tmp), json::object());
  std::string mid = service.CreateModel(TinyModel(ds["id"], 2))["id"];

  // Induced failures at random log lines.
  calls = 0;
  service.StartTraining(mid);
  service.WaitIdle();
  const int per_run = calls;
  std::mt19937_64 rng(8);
  int failed_as_expected = 0;
  const int trials = 20;
  for (int i = 0; i < trials; ++i) {
    calls = 0;
    fail_at = static_cast<int>(rng() % per_run);
    std::string jid = service.StartTraining(mid)["id"];
    service.WaitIdle();
    json j = service.GetJob(jid);
    failed_as_expected += j["state"] == "failed" &&
                          j["error"].get<std::string>().find("induced") != std::string::npos;
  }
  fail_at = -1;

  // Reconnects during a live job.
  slow = true;
  std::string mid2 = service.CreateModel(TinyModel(ds["id"], 60))["id"];
  std::string jid = service.StartTraining(mid2)["id"];
  httplib::Client c("127.0.0.1", port);
  c.set_read_timeout(60, 0);
  std::vector<std::pair<size_t, std::string>> stitched;
  size_t next = 0;
  int disconnects = 0, while_running = 0;
  while (disconnects < 100) {
    size_t k = 1 + rng() % 4;
    bool running = !service.JobFinished(jid);
    StreamRead part = ReadStream(c, jid, next, k);
    for (const auto &l : part.lines) stitched.push_back(l);
    if (!part.lines.empty()) next = part.lines.back().first + 1;
    ++disconnects;
    while_running += running;
    if (part.completed && part.lines.size() < k) break;
  }
  StreamRead rest = ReadStream(c, jid, next, SIZE_MAX);
  for (const auto &l : rest.lines) stitched.push_back(l);
  service.WaitIdle();
  slow = false;
  StreamRead full = ReadStream(c, jid, 0, SIZE_MAX);
  bool gap_free = rest.completed && stitched == full.lines && !full.lines.empty();
  for (size_t i = 0; i < stitched.size(); ++i) gap_free = gap_free && stitched[i].first == i;

  server.stop();
  th.join();

  int legal = 0, total = 0;
  {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto &[id, ts] : transitions) {
      ++total;
      bool ok = ts.size() == 2 && ts[0].first == JobState::kQueued &&
                ts[0].second == JobState::kRunning && ts[1].first == JobState::kRunning &&
                IsTerminal(ts[1].second);
      for (const auto &[a, b] : ts) ok = ok && IsLegalTransition(a, b);
      legal += ok;
    }
  }
  fs::remove_all(dir);
  fs::remove_all(tmp);
  bool pass = failed_as_expected == trials && legal == total && total == trials + 2 &&
              disconnects == 100 && gap_free;
  return {pass, Fmt("%d/%d induced failures ended failed; %d/%d jobs with only legal transitions; "
                    "%d disconnects (%d during the job), replay of %zu lines %s",
                    failed_as_expected, trials, legal, total, disconnects, while_running,
                    full.lines.size(), gap_free ? "gap-free and duplicate-free" : "BROKEN")};
}

// ---------------------------------------------------------------- CLI

int Cli(const fs::path &dir, const std::string &args) {
  std::string cmd = "cd '" + dir.string() + "' && '" FIELDASR_CLI "' " + args + " > cli.out 2> cli.err";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome CliPipeline() {
  fs::path root = Scratch("cli");
  const std::string model_flags =
      " --encoder-layers 1 --hidden 16 --decoder-hidden 16 --attention-dim 16 --batch 2";
  std::string failed_step;
  auto run = [&](const std::string &tag) {
    fs::path w = root / tag;
    fs::create_directories(w);
    const std::string steps[] = {
        "synth -o train --seed 7 --utterances 12",
        "synth -o test --seed 8 --utterances 4",
        "train train/corpus.json train/features.far -o m.ckpt --metrics train.csv -q --epochs 2 "
        "--seed 7" + model_flags,
        "decode m.ckpt --corpus test/corpus.json --features test/features.far -o hyp.txt "
        "--ref-out ref.txt",
        "cer --keyed --ref ref.txt --hyp hyp.txt --csv cer.csv"};
    for (const std::string &s : steps)
      if (Cli(w, s) != 0 && failed_step.empty()) failed_step = s;
  };
  run("a");
  run("b");
  bool identical = failed_step.empty();
  std::string differing;
  for (const char *f : {"train.csv", "cer.csv", "hyp.txt", "m.ckpt"}) {
    bool same = fs::exists(root / "a" / f) &&
                ReadFileBytes(root / "a" / f) == ReadFileBytes(root / "b" / f);
    identical = identical && same;
    if (!same) differing += std::string(" ") + f;
  }
  std::string cer = failed_step.empty() ? ReadFileBytes(root / "a" / "cli.out") : "";
  if (!cer.empty() && cer.back() == '\n') cer.pop_back();
  fs::remove_all(root);
  if (!failed_step.empty()) return {false, "step failed: " + failed_step};
  return {identical, "two seed-7 runs of synth, train (2 epochs), decode, cer: train.csv and "
                     "cer.csv byte-identical: " + std::string(identical ? "yes" : "NO" + differing) +
                     "; test CER " + cer};
}

struct Criterion {
  const char *name;
  double limit_s;  // 0: no runtime limit
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace fieldasr

int main(int argc, char **argv) {
  using namespace fieldasr;
  const Criterion criteria[] = {
      {"ctc-oracle-equivalence", 60, CtcOracle},
      {"gradient-suite", 300, GradientSuite},
      {"cer-oracle", 0, CerOracle},
      {"overfit", 600, Overfit},
      {"learning-curve-shape", 1800, Curve},
      {"format-round-trips", 0, RoundTrips},
      {"hyperparameter-defaults", 0, Defaults},
      {"service-state-machine", 0, ServiceStateMachine},
      {"cli-pipeline-determinism", 0, CliPipeline},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    bool selected = argc == 1;
    for (int i = 1; i < argc; ++i) selected = selected || std::string(c.name).find(argv[i]) != std::string::npos;
    if (!selected) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += Fmt(" [over the %.0f s limit]", c.limit_s);
    }
    std::string limit = c.limit_s > 0 ? Fmt(" (limit %.0f s)", c.limit_s) : "";
    std::printf("%s %s: %s [%.1f s%s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                limit.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
