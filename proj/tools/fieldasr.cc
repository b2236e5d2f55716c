// tools/fieldasr.cc

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

// Command-line driver: one subcommand per pipeline stage.
//
//   fieldasr synth -o data/train --seed 7
//   fieldasr train data/train/corpus.json data/train/features.far -o m.ckpt --metrics m.csv
//   fieldasr decode m.ckpt --corpus c.json --features f.far -o hyp.txt --ref-out ref.txt
//   fieldasr cer --ref ref.txt --hyp hyp.txt --keyed
//
// Exit status: 0 on success, 1 when an operation fails, 2 on bad usage.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/clean-text.h"
#include "corpus/corpus-ops.h"
#include "corpus/ingest.h"
#include "corpus/kaldi-dir.h"
#include "eval/cer.h"
#include "eval/learning-curve.h"
#include "eval/synth.h"
#include "feat/feature-archive.h"
#include "feat/wave-io.h"
#include "model/checkpoint.h"
#include "model/decode.h"
#include "service/http-api.h"
#include "service/pipeline.h"
#include "service/service.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fieldasr {
namespace {

// Thrown for argument combinations CLI11 cannot express; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void PrintJson(const json &j) { std::cout << j.dump(2) << "\n"; }

// Writes to a file, or stdout when path is empty or "-".
void Output(const std::string &path, const std::string &bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    std::cout.flush();
  } else {
    WriteFileBytes(path, bytes);
  }
}

std::vector<std::string> Lines(const std::string &bytes) {
  std::vector<std::string> out;
  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::pair<std::string, std::string> SplitKey(const std::string &line) {
  size_t sp = line.find_first_of(" \t");
  if (sp == std::string::npos) return {line, ""};
  return {line.substr(0, sp), std::string(TrimAscii(std::string_view(line).substr(sp + 1)))};
}

std::string Lower(std::string s) {
  for (char &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Sidecar holding the feature config next to a feature archive.
fs::path FeatureConfigPath(const fs::path &archive) { return archive.string() + ".json"; }

FeatureConfig LoadFeatureConfig(const fs::path &archive) {
  fs::path p = FeatureConfigPath(archive);
  if (!fs::exists(p)) return FeatureConfig();
  return FeatureConfigFromJson(json::parse(ReadFileBytes(p)));
}

void SaveFeatureArchive(const fs::path &path, const std::vector<FeatureMatrix> &features,
                        const FeatureConfig &cfg) {
  WriteFeatureArchive(path, features);
  WriteFileBytes(FeatureConfigPath(path), ToJson(cfg).dump(2) + "\n");
}

LogSink StderrLog(bool quiet, const std::string &log_file) {
  auto file = log_file.empty() ? nullptr : std::make_shared<std::ofstream>(log_file);
  if (file && !*file) Fail(ErrorKind::kIo, "cannot open ", log_file);
  return [quiet, file](const std::string &line) {
    if (file) *file << line << "\n" << std::flush;
    if (!quiet) std::cerr << line << "\n";
  };
}

// ---- flag groups shared by several commands

struct ModelFlags {
  ModelConfig model;
  TrainConfig train;
  bool no_sort = false;
  void Add(CLI::App *cmd) {
    cmd->add_option("--encoder-layers", model.encoder_layers, "BiLSTM encoder layers")
        ->capture_default_str();
    cmd->add_option("--hidden", model.hidden_size, "encoder units per direction")
        ->capture_default_str();
    cmd->add_option("--decoder-hidden", model.decoder_hidden, "decoder LSTM units")
        ->capture_default_str();
    cmd->add_option("--attention-dim", model.attention_dim)->capture_default_str();
    cmd->add_option("--frame-stacking", model.frame_stacking)->capture_default_str();
    cmd->add_option("--epochs", train.epochs)->capture_default_str();
    cmd->add_option("--batch", train.batch_utterances, "utterances per update")
        ->capture_default_str();
    cmd->add_option("--ctc-weight", train.ctc_weight, "lambda in the hybrid loss")
        ->capture_default_str();
    cmd->add_option("--clip-norm", train.clip_norm)->capture_default_str();
    cmd->add_option("--rho", train.adadelta_rho, "Adadelta decay")->capture_default_str();
    cmd->add_option("--epsilon", train.adadelta_epsilon, "Adadelta epsilon")
        ->capture_default_str();
    cmd->add_option("--seed", train.seed)->capture_default_str();
    cmd->add_flag("--no-sort", no_sort, "shuffle utterances instead of length-sorted batches");
  }
  void Finish() {
    train.sort_by_length = !no_sort;
    model.ctc_weight = train.ctc_weight;
    try {
      model.Validate();
      train.Validate();
    } catch (const Error &e) {
      throw UsageError(e.what());
    }
  }
};

void AddDecodeFlags(CLI::App *cmd, DecodeOptions &d) {
  cmd->add_option("--beam", d.beam)->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--decode-ctc-weight", d.ctc_weight, "lambda used in joint decoding")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--max-len", d.max_len, "0 = number of encoder frames")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void AddFeatureFlags(CLI::App *cmd, FeatureConfig &f) {
  cmd->add_option("--sample-rate", f.sample_rate)->capture_default_str();
  cmd->add_option("--n-mels", f.n_mels)->capture_default_str();
  cmd->add_option("--window-ms", f.window_ms)->capture_default_str();
  cmd->add_option("--hop-ms", f.hop_ms)->capture_default_str();
  cmd->add_option("--n-fft", f.n_fft)->capture_default_str();
  cmd->add_option("--fmin", f.mel_fmin)->capture_default_str();
  cmd->add_option("--fmax", f.mel_fmax, "<= 0 means half the sample rate")
      ->capture_default_str();
}

std::vector<std::pair<std::string, std::string>> ReadKeyed(const std::string &path) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string &line : Lines(ReadFileBytes(path)))
    if (!TrimAscii(line).empty()) out.push_back(SplitKey(line));
  return out;
}

// ---- commands

struct IngestArgs {
  std::vector<std::string> files;
  std::string out, tier, genres;
  bool keep_going = false;
};

int RunIngest(const IngestArgs &a) {
  std::vector<TranscriptionFile> transcriptions;
  std::map<std::string, fs::path> audio;
  for (const std::string &f : a.files) {
    std::string ext = Lower(fs::path(f).extension().string());
    std::string name = fs::path(f).filename().string();
    if (ext == ".eaf" || ext == ".xml")
      transcriptions.push_back({name, ReadFileBytes(f)});
    else if (ext == ".wav")
      audio[RecordingIdFor(name)] = fs::absolute(f);
    else
      throw UsageError("unsupported input '" + f + "' (expected .eaf, .xml or .wav)");
  }
  if (transcriptions.empty()) throw UsageError("no transcription files (.eaf or .xml)");
  IngestOptions opts;
  if (!a.tier.empty()) opts.tier = a.tier;
  if (!a.genres.empty()) opts.genres = ParseGenreManifest(ReadFileBytes(a.genres));
  IngestResult r = BuildCorpus(transcriptions, audio, opts);
  for (const FileProblem &p : r.problems)
    std::cerr << p.file << ": " << ErrorKindName(p.kind) << ": " << p.message << "\n";
  if (!r.problems.empty() && !a.keep_going) return 1;
  if (r.corpus.utterances.empty()) Fail(ErrorKind::kSize, "no utterances found");
  SaveCorpus(r.corpus, a.out);
  PrintJson(SummaryToJson(Summarize(r.corpus)));
  return 0;
}

struct CleanArgs {
  std::string in, out, remove_chars;
  bool lowercase = false, keep_whitespace = false;
};

int RunClean(const CleanArgs &a) {
  CleanConfig cfg;
  cfg.remove_chars = CleanConfig::CharsOf(a.remove_chars);
  cfg.lowercase = a.lowercase;
  cfg.collapse_whitespace = !a.keep_whitespace;
  Corpus c = CleanCorpus(LoadCorpus(a.in), cfg);
  SaveCorpus(c, a.out);
  PrintJson(SummaryToJson(Summarize(c)));
  return 0;
}

struct KaldiArgs {
  std::string in, out;
  bool reverse = false;
};

int RunKaldiDir(const KaldiArgs &a) {
  if (a.reverse) {
    Corpus c = ReadKaldiDir(a.in);
    SaveCorpus(c, a.out);
    PrintJson(SummaryToJson(Summarize(c)));
  } else {
    for (const fs::path &p : WriteKaldiDir(LoadCorpus(a.in), a.out)) std::cout << p.string() << "\n";
  }
  return 0;
}

struct FeaturesArgs {
  std::string corpus, out;
  FeatureConfig cfg;
};

int RunFeatures(const FeaturesArgs &a) {
  Corpus c = LoadCorpus(a.corpus);
  SaveFeatureArchive(a.out, ComputeCorpusFeatures(c, a.cfg), a.cfg);
  std::cout << c.utterances.size() << " feature matrices written to " << a.out << "\n";
  return 0;
}

struct SynthArgs {
  std::string out, alphabet = "abcde";
  SynthSpec spec;
  SynthAudioSpec audio_spec;
  bool audio = false;
  int utterances = 20;
  int min_chars = 3, max_chars = 8;
  uint64_t seed = 0;
};

int RunSynth(SynthArgs a) {
  std::u32string alphabet = DecodeUtf8(a.alphabet);
  fs::create_directories(a.out);
  if (a.audio) {
    SynthAudioSpec &s = a.audio_spec;
    s.alphabet = alphabet;
    s.num_utterances = a.utterances;
    s.min_chars = a.min_chars;
    s.max_chars = a.max_chars;
    s.seed = a.seed;
    std::vector<std::string> stems = WriteSynthAudioCorpus(s, a.out);
    std::cout << stems.size() << " clips written to " << a.out << "\n";
    return 0;
  }
  SynthSpec &s = a.spec;
  s.alphabet = alphabet;
  s.num_utterances = a.utterances;
  s.min_chars = a.min_chars;
  s.max_chars = a.max_chars;
  s.seed = a.seed;
  SynthCorpus sc = MakeSynthCorpus(s);
  FeatureConfig fc;
  fc.n_mels = s.feature_dim;
  SaveCorpus(sc.corpus, fs::path(a.out) / "corpus.json");
  SaveFeatureArchive(fs::path(a.out) / "features.far", sc.features, fc);
  PrintJson(SummaryToJson(Summarize(sc.corpus)));
  return 0;
}

struct TrainArgs {
  std::string corpus, features, out, metrics, log;
  double dev_fraction = 0.1;
  bool quiet = false;
  ModelFlags flags;
};

int RunTrain(TrainArgs a) {
  a.flags.Finish();
  Corpus c = LoadCorpus(a.corpus);
  std::vector<FeatureMatrix> feats = ReadFeatureArchive(a.features);
  TrainRequest req{a.flags.model, a.flags.train, a.dev_fraction};
  TrainOutcome o = TrainOnCorpus(c, feats, LoadFeatureConfig(a.features), req,
                                 StderrLog(a.quiet, a.log));
  SaveCheckpoint(o.model, a.out);
  if (!a.metrics.empty()) WriteFileBytes(a.metrics, ProfileToCsv(TrainingProfile(o.history)));
  return 0;
}

struct DecodeArgs {
  std::string model, corpus, features, out, ref_out;
  std::vector<std::string> wavs;
  DecodeOptions opts;
};

int RunDecode(const DecodeArgs &a) {
  if (a.wavs.empty() == a.corpus.empty())
    throw UsageError("give either --corpus with --features, or --wav");
  if (!a.corpus.empty() && a.features.empty()) throw UsageError("--corpus needs --features");
  if (!a.ref_out.empty() && a.corpus.empty()) throw UsageError("--ref-out needs --corpus");
  HybridModel model = LoadCheckpoint(a.model);
  std::string hyp, ref;
  if (!a.wavs.empty()) {
    for (const std::string &w : a.wavs) {
      std::string bytes = ReadFileBytes(w);
      int rate = ParseWaveHeader(bytes).sample_rate;
      Transcript t = TranscribeSamples(model, DecodeWav(bytes, rate), rate, a.opts);
      hyp += fs::path(w).stem().string() + " " + t.text + "\n";
    }
  } else {
    Corpus c = LoadCorpus(a.corpus);
    std::vector<FeatureMatrix> feats = ReadFeatureArchive(a.features);
    std::map<std::string, const FeatureMatrix *> by_id;
    for (const FeatureMatrix &f : feats) by_id[f.utterance_id] = &f;
    for (const Utterance &u : c.utterances) {
      auto it = by_id.find(u.id);
      if (it == by_id.end()) Fail(ErrorKind::kNotFound, "no features for utterance ", u.id);
      Hypothesis h = DecodeJoint(model, NormalizeFor(model, *it->second), a.opts);
      hyp += u.id + " " + h.text + "\n";
      ref += u.id + " " + u.text + "\n";
    }
  }
  Output(a.out, hyp);
  if (!a.ref_out.empty()) WriteFileBytes(a.ref_out, ref);
  return 0;
}

struct CerArgs {
  std::string ref, hyp, csv;
  bool keyed = false;
};

int RunCer(const CerArgs &a) {
  std::vector<std::string> ids;
  std::vector<TextPair> pairs;
  if (a.keyed) {
    auto refs = ReadKeyed(a.ref);
    std::map<std::string, std::string> hyps;
    for (auto &[k, t] : ReadKeyed(a.hyp))
      if (!hyps.emplace(k, t).second) Fail(ErrorKind::kIntegrity, "duplicate key ", k, " in ", a.hyp);
    std::set<std::string> seen;
    for (auto &[k, t] : refs) {
      if (!seen.insert(k).second) Fail(ErrorKind::kIntegrity, "duplicate key ", k, " in ", a.ref);
      auto it = hyps.find(k);
      if (it == hyps.end()) Fail(ErrorKind::kNotFound, "no hypothesis for ", k);
      ids.push_back(k);
      pairs.emplace_back(t, it->second);
    }
    if (hyps.size() != refs.size())
      Fail(ErrorKind::kIntegrity, a.hyp, " has keys missing from ", a.ref);
  } else {
    std::vector<std::string> r = Lines(ReadFileBytes(a.ref)), h = Lines(ReadFileBytes(a.hyp));
    if (r.size() != h.size())
      Fail(ErrorKind::kSize, a.ref, " has ", r.size(), " lines but ", a.hyp, " has ", h.size());
    for (size_t i = 0; i < r.size(); ++i) {
      ids.push_back(std::to_string(i + 1));
      pairs.emplace_back(r[i], h[i]);
    }
  }
  CerReport total = CorpusCer(pairs);
  if (!a.csv.empty()) {
    std::string csv = "utterance,ref_chars,substitutions,insertions,deletions,cer\n";
    char buf[160];
    auto row = [&](const std::string &id, const CerReport &c) {
      double rate = c.ref_chars > 0 ? static_cast<double>(c.edits()) / c.ref_chars
                                    : std::nan("");
      std::snprintf(buf, sizeof(buf), ",%ld,%ld,%ld,%ld,%.6f\n", c.ref_chars, c.substitutions,
                    c.insertions, c.deletions, rate);
      csv += id + buf;
    };
    for (size_t i = 0; i < pairs.size(); ++i)
      row(ids[i], EditDistance(DecodeUtf8(pairs[i].first), DecodeUtf8(pairs[i].second)));
    row("total", total);
    WriteFileBytes(a.csv, csv);
  }
  std::printf("%.4f\n", total.cer);
  return 0;
}

struct CurveArgs {
  std::string corpus, features, out, dev_corpus, dev_features, log;
  std::vector<double> fractions{0.1, 0.3, 1.0}, minutes;
  double dev_fraction = 0.1;
  uint64_t subset_seed = 0;
  bool quiet = false;
  ModelFlags flags;
  DecodeOptions decode;
};

int RunCurve(CurveArgs a) {
  a.flags.Finish();
  if (a.dev_corpus.empty() != a.dev_features.empty())
    throw UsageError("--dev-corpus and --dev-features go together");
  Corpus pool = LoadCorpus(a.corpus), dev;
  std::vector<FeatureMatrix> feats = ReadFeatureArchive(a.features);
  if (!a.dev_corpus.empty()) {
    dev = LoadCorpus(a.dev_corpus);
    for (FeatureMatrix &f : ReadFeatureArchive(a.dev_features)) feats.push_back(std::move(f));
  } else {
    std::tie(pool, dev) = SplitCorpus(pool, a.dev_fraction, a.flags.train.seed);
  }
  std::vector<double> minutes = a.minutes;
  if (minutes.empty()) {
    double total = Summarize(pool).total_minutes;
    for (double f : a.fractions) {
      if (!(f > 0.0 && f <= 1.0)) throw UsageError("fractions must be in (0, 1]");
      minutes.push_back(f * total);
    }
  }
  a.flags.model.input_dim = feats.empty() ? 0 : static_cast<int>(feats[0].frames.cols());
  CurveSettings s{a.flags.model, a.flags.train, a.decode, a.subset_seed};
  std::vector<CurvePoint> pts = LearningCurve(pool, dev, feats, minutes, s, StderrLog(a.quiet, a.log));
  Output(a.out, CurveToCsv(pts));
  return 0;
}

struct StateArgs {
  std::string state_dir, model, out, file, name;
};

ServiceOptions OfflineService(const std::string &dir) {
  if (!fs::is_directory(dir)) Fail(ErrorKind::kNotFound, "no state directory ", dir);
  ServiceOptions o;
  o.state_dir = dir;
  o.run_jobs = false;
  return o;
}

int RunExport(const StateArgs &a) {
  Service service(OfflineService(a.state_dir));
  Output(a.out, service.ExportModel(a.model));
  return 0;
}

int RunImport(const StateArgs &a) {
  Service service(OfflineService(a.state_dir));
  PrintJson(service.ImportModel(ReadFileBytes(a.file), a.name));
  return 0;
}

struct ServeArgs {
  std::string state_dir, host = "127.0.0.1";
  int port = 8080, workers = 1;
  uint64_t seed = 0;
};

int RunServe(const ServeArgs &a) {
  ServiceOptions o;
  o.state_dir = a.state_dir;
  o.workers = a.workers;
  o.seed = a.seed;
  return RunService(o, a.host, a.port);
}

}  // namespace
}  // namespace fieldasr

int main(int argc, char **argv) {
  using namespace fieldasr;
  CLI::App app("fieldasr: end-to-end speech recognition for small field corpora");
  app.set_config("--config", "", "TOML or INI file with flag values (command-line flags win)");
  app.require_subcommand(1);
  std::function<int()> run;

  IngestArgs ingest;
  auto *c = app.add_subcommand("ingest", "build a corpus from .eaf/.xml transcriptions and .wav audio");
  c->add_option("files", ingest.files, "transcription and audio files")->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", ingest.out, "corpus JSON to write")->required();
  c->add_option("--tier", ingest.tier, "ELAN tier id (default: first tier with annotations)");
  c->add_option("--genres", ingest.genres, "genre manifest (recording genre per line)")->check(CLI::ExistingFile);
  c->add_flag("--keep-going", ingest.keep_going, "skip files that fail instead of stopping");
  c->callback([&] { run = [&] { return RunIngest(ingest); }; });

  CleanArgs clean;
  c = app.add_subcommand("clean", "normalize corpus text");
  c->add_option("corpus", clean.in)->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", clean.out)->required();
  c->add_option("--remove-chars", clean.remove_chars, "characters to delete, e.g. \",.?\"");
  c->add_flag("--lowercase", clean.lowercase);
  c->add_flag("--keep-whitespace", clean.keep_whitespace, "do not collapse runs of spaces");
  c->callback([&] { run = [&] { return RunClean(clean); }; });

  KaldiArgs kaldi;
  c = app.add_subcommand("kaldi-dir", "write a Kaldi data directory (or read one with --reverse)");
  c->add_option("input", kaldi.in, "corpus JSON, or a data directory with --reverse")->required()->check(CLI::ExistingPath);
  c->add_option("-o,--out", kaldi.out)->required();
  c->add_flag("--reverse", kaldi.reverse, "read a data directory into corpus JSON");
  c->callback([&] { run = [&] { return RunKaldiDir(kaldi); }; });

  FeaturesArgs features;
  c = app.add_subcommand("features", "compute log-mel features for a corpus");
  c->add_option("corpus", features.corpus)->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", features.out, "feature archive to write")->required();
  AddFeatureFlags(c, features.cfg);
  c->callback([&] { run = [&] { return RunFeatures(features); }; });

  SynthArgs synth;
  c = app.add_subcommand("synth", "generate a synthetic corpus (features, or audio with --audio)");
  c->add_option("-o,--out", synth.out, "output directory")->required();
  c->add_option("--utterances", synth.utterances)->capture_default_str();
  c->add_option("--alphabet", synth.alphabet)->capture_default_str();
  c->add_option("--min-chars", synth.min_chars)->capture_default_str();
  c->add_option("--max-chars", synth.max_chars)->capture_default_str();
  c->add_option("--seed", synth.seed)->capture_default_str();
  c->add_option("--frames-per-char", synth.spec.template_frames_per_char)->capture_default_str();
  c->add_option("--sigma", synth.spec.noise_sigma, "feature noise")->capture_default_str();
  c->add_option("--dim", synth.spec.feature_dim)->capture_default_str();
  c->add_flag("--audio", synth.audio, "write .wav/.eaf pairs instead of features");
  c->add_option("--char-ms", synth.audio_spec.char_ms)->capture_default_str();
  c->add_option("--pad-ms", synth.audio_spec.pad_ms)->capture_default_str();
  c->add_option("--noise", synth.audio_spec.noise_amplitude)->capture_default_str();
  c->callback([&] { run = [&] { return RunSynth(synth); }; });

  TrainArgs train;
  c = app.add_subcommand("train", "train a model; writes a checkpoint and per-epoch CER CSV");
  c->add_option("corpus", train.corpus)->required()->check(CLI::ExistingFile);
  c->add_option("features", train.features)->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", train.out, "checkpoint to write")->required();
  c->add_option("--metrics", train.metrics, "CSV: epoch,train_cer,dev_cer");
  c->add_option("--dev-fraction", train.dev_fraction)->capture_default_str();
  c->add_option("--log", train.log, "also write progress lines here");
  c->add_flag("-q,--quiet", train.quiet);
  train.flags.Add(c);
  c->callback([&] { run = [&] { return RunTrain(train); }; });

  DecodeArgs decode;
  c = app.add_subcommand("decode", "transcribe a corpus or wav files");
  c->add_option("model", decode.model)->required()->check(CLI::ExistingFile);
  c->add_option("--corpus", decode.corpus)->check(CLI::ExistingFile);
  c->add_option("--features", decode.features)->check(CLI::ExistingFile);
  c->add_option("--wav", decode.wavs)->check(CLI::ExistingFile);
  c->add_option("-o,--out", decode.out, "keyed hypotheses (default stdout)");
  c->add_option("--ref-out", decode.ref_out, "keyed references from the corpus");
  AddDecodeFlags(c, decode.opts);
  c->callback([&] { run = [&] { return RunDecode(decode); }; });

  CerArgs cer;
  c = app.add_subcommand("cer", "character error rate of hypotheses against references");
  c->add_option("--ref", cer.ref)->required()->check(CLI::ExistingFile);
  c->add_option("--hyp", cer.hyp)->required()->check(CLI::ExistingFile);
  c->add_flag("--keyed", cer.keyed, "lines are '<id> <text>' and are matched by id");
  c->add_option("--csv", cer.csv, "per-utterance counts");
  c->callback([&] { run = [&] { return RunCer(cer); }; });

  CurveArgs curve;
  c = app.add_subcommand("curve", "dev CER against training minutes on nested subsets");
  c->add_option("corpus", curve.corpus)->required()->check(CLI::ExistingFile);
  c->add_option("features", curve.features)->required()->check(CLI::ExistingFile);
  c->add_option("-o,--out", curve.out, "CSV: train_minutes,cer_percent,epochs_used");
  auto *fr = c->add_option("--fractions", curve.fractions, "subset sizes as pool fractions")->delimiter(',');
  c->add_option("--minutes", curve.minutes, "subset sizes in minutes")->delimiter(',')->excludes(fr);
  c->add_option("--dev-fraction", curve.dev_fraction)->capture_default_str();
  c->add_option("--dev-corpus", curve.dev_corpus)->check(CLI::ExistingFile);
  c->add_option("--dev-features", curve.dev_features)->check(CLI::ExistingFile);
  c->add_option("--subset-seed", curve.subset_seed)->capture_default_str();
  c->add_option("--log", curve.log);
  c->add_flag("-q,--quiet", curve.quiet);
  curve.flags.Add(c);
  AddDecodeFlags(c, curve.decode);
  c->callback([&] { run = [&] { return RunCurve(curve); }; });

  StateArgs exp;
  c = app.add_subcommand("export", "copy a trained model's checkpoint out of a state directory");
  c->add_option("--state-dir", exp.state_dir)->required();
  c->add_option("--model", exp.model, "model id, e.g. m-0001")->required();
  c->add_option("-o,--out", exp.out)->required();
  c->callback([&] { run = [&] { return RunExport(exp); }; });

  StateArgs imp;
  c = app.add_subcommand("import", "add a checkpoint to a state directory as a trained model");
  c->add_option("checkpoint", imp.file)->required()->check(CLI::ExistingFile);
  c->add_option("--state-dir", imp.state_dir)->required();
  c->add_option("--name", imp.name);
  c->callback([&] { run = [&] { return RunImport(imp); }; });

  ServeArgs serve;
  c = app.add_subcommand("serve", "run the HTTP service");
  c->add_option("--state-dir", serve.state_dir)->required();
  c->add_option("--host", serve.host)->capture_default_str();
  c->add_option("--port", serve.port)->capture_default_str()->check(CLI::Range(0, 65535));
  c->add_option("--workers", serve.workers)->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--seed", serve.seed, "training seed for models that do not set one")->capture_default_str();
  c->callback([&] { run = [&] { return RunServe(serve); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }
  try {
    return run();
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    std::cerr << "error: " << ErrorKindName(e.kind()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
