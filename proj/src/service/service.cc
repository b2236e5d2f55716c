// service/service.cc

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

#include "service/service.h"

#include <algorithm>
#include <cstdio>

#include "base/error.h"
#include "base/io-util.h"
#include "base/text-utils.h"
#include "corpus/clean-text.h"
#include "corpus/ingest.h"
#include "corpus/kaldi-dir.h"
#include "feat/feature-archive.h"
#include "feat/wave-io.h"
#include "model/checkpoint.h"
#include "service/pipeline.h"

namespace fieldasr {

namespace fs = std::filesystem;
using nlohmann::json;

ApiError::ApiError(int status, const std::string &message, json details)
    : std::runtime_error(message), status_(status) {
  body_ = {{"error", message}};
  if (!details.is_null()) body_["details"] = std::move(details);
}

int StatusForError(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kState: return 409;
    case ErrorKind::kIo: return 500;
    default: return 422;
  }
}

namespace {

json ReadJson(const fs::path &path) {
  json j = json::parse(ReadFileBytes(path), nullptr, false);
  if (j.is_discarded()) Fail(ErrorKind::kParse, "corrupt metadata ", path.string());
  return j;
}

void WriteJson(const fs::path &path, const json &j) { WriteFileBytes(path, j.dump(2) + "\n"); }

std::string NextIdFrom(const char *prefix, const std::vector<std::string> &ids) {
  int max = 0;
  std::string p = std::string(prefix) + "-";
  for (const std::string &id : ids)
    if (id.rfind(p, 0) == 0) max = std::max(max, std::atoi(id.c_str() + p.size()));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", p.c_str(), max + 1);
  return buf;
}

std::string Lower(std::string s) {
  for (char &c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

CleanConfig CleanFromJson(const json &j) {
  CleanConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) Fail(ErrorKind::kParse, "clean config must be an object");
  if (j.contains("remove_chars"))
    c.remove_chars = CleanConfig::CharsOf(j["remove_chars"].get<std::string>());
  if (j.contains("collapse_whitespace"))
    c.collapse_whitespace = j["collapse_whitespace"].get<bool>();
  if (j.contains("lowercase")) c.lowercase = j["lowercase"].get<bool>();
  return c;
}

json CleanToJson(const CleanConfig &c) {
  std::u32string chars(c.remove_chars.begin(), c.remove_chars.end());
  return {{"remove_chars", EncodeUtf8(chars)},
          {"collapse_whitespace", c.collapse_whitespace},
          {"lowercase", c.lowercase}};
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  if (options_.run_jobs && options_.workers < 1)
    Fail(ErrorKind::kParameter, "workers must be >= 1");
  for (const char *sub : {"datasets", "models", "jobs"}) {
    std::error_code ec;
    fs::create_directories(options_.state_dir / sub, ec);
    if (ec) Fail(ErrorKind::kIo, "cannot create state directory: ", ec.message());
  }
  Load();
  if (!options_.run_jobs) return;
  for (int i = 0; i < options_.workers; ++i) workers_.emplace_back([this] { WorkerLoop(); });
}

Service::~Service() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  for (std::thread &t : workers_) t.join();
}

fs::path Service::DatasetDir(const std::string &id) const {
  return options_.state_dir / "datasets" / id;
}
fs::path Service::ModelDir(const std::string &id) const {
  return options_.state_dir / "models" / id;
}
fs::path Service::JobDir(const std::string &id) const { return options_.state_dir / "jobs" / id; }

std::string Service::NextId(const char *prefix, const std::map<std::string, json> &m) const {
  std::vector<std::string> ids;
  for (const auto &[id, _] : m) ids.push_back(id);
  return NextIdFrom(prefix, ids);
}

void Service::Load() {
  auto dirs = [](const fs::path &root) {
    std::vector<fs::path> out;
    for (const auto &entry : fs::directory_iterator(root))
      if (entry.is_directory() && fs::exists(entry.path() / "meta.json"))
        out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
  };
  for (const fs::path &d : dirs(options_.state_dir / "datasets")) {
    json meta = ReadJson(d / "meta.json");
    datasets_[meta.at("id").get<std::string>()] = meta;
  }
  for (const fs::path &d : dirs(options_.state_dir / "models")) {
    json meta = ReadJson(d / "meta.json");
    models_[meta.at("id").get<std::string>()] = meta;
  }
  for (const fs::path &d : dirs(options_.state_dir / "jobs")) {
    JobRecord record = JobFromJson(ReadJson(d / "meta.json"));
    Job job{record, std::make_shared<JobLog>(d / "log.txt")};
    std::string id = record.id;
    auto [it, _] = jobs_.emplace(id, std::move(job));
    Job &j = it->second;
    if (!options_.run_jobs) continue;
    if (j.record.state == JobState::kRunning) {
      j.log->Append("error: interrupted by a service restart");
      j.record.error = "interrupted by a service restart";
      Transition(j, JobState::kFailed);
    }
    if (IsTerminal(j.record.state)) {
      j.log->Close();
    } else {
      j.log->Append("requeued after a service restart");
      queue_.push_back(id);
    }
  }
}

void Service::SaveJob(const Job &job) const {
  WriteJson(JobDir(job.record.id) / "meta.json", JobToJson(job.record));
}

void Service::SaveModel(const json &meta) const {
  WriteJson(ModelDir(meta.at("id").get<std::string>()) / "meta.json", meta);
}

void Service::Transition(Job &job, JobState next) {
  JobState from = job.record.state;
  job.record.TransitionTo(next);
  SaveJob(job);
  if (options_.on_transition) options_.on_transition(job.record.id, from, next);
}

// ---- datasets

json Service::CreateDataset(const std::vector<UploadedFile> &files, const json &config) {
  if (!config.is_object()) throw ApiError(422, "dataset config must be a JSON object");
  std::vector<TranscriptionFile> transcriptions;
  std::vector<const UploadedFile *> audio;
  std::optional<std::string> manifest;
  for (const UploadedFile &f : files) {
    std::string name = fs::path(f.name).filename().string();
    if (name.empty() || name == "." || name == "..")
      throw ApiError(422, "bad upload file name '" + f.name + "'");
    std::string ext = Lower(fs::path(name).extension().string());
    if (ext == ".eaf" || ext == ".xml") {
      transcriptions.push_back({name, f.bytes});
    } else if (ext == ".wav") {
      audio.push_back(&f);
    } else if (name == "genres.txt") {
      manifest = f.bytes;
    } else {
      throw ApiError(422, "unsupported upload '" + name + "'");
    }
  }
  if (transcriptions.empty()) throw ApiError(422, "no transcription files (.eaf or .xml)");

  CleanConfig clean;
  IngestOptions opts;
  std::string name;
  try {
    clean = CleanFromJson(config.value("clean", json()));
    if (config.contains("tier") && !config["tier"].is_null())
      opts.tier = config["tier"].get<std::string>();
    name = config.value("name", std::string());
    if (manifest) opts.genres = ParseGenreManifest(*manifest);
  } catch (const json::exception &e) {
    throw ApiError(422, std::string("bad dataset config: ") + e.what());
  } catch (const Error &e) {
    throw ApiError(422, e.what(), {{"kind", std::string(ErrorKindName(e.kind()))}});
  }

  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    id = NextId("ds", datasets_);
    datasets_[id] = json{{"id", id}, {"pending", true}};
  }
  const fs::path dir = DatasetDir(id);
  try {
    fs::create_directories(dir / "files");
    std::map<std::string, fs::path> audio_paths;
    for (const UploadedFile *f : audio) {
      std::string fname = fs::path(f->name).filename().string();
      fs::path p = fs::absolute(dir / "files" / fname);
      WriteFileBytes(p, f->bytes);
      audio_paths[RecordingIdFor(fname)] = p;
    }
    for (const TranscriptionFile &t : transcriptions) WriteFileBytes(dir / "files" / t.name, t.bytes);

    IngestResult result = BuildCorpus(transcriptions, audio_paths, opts);
    if (!result.problems.empty()) {
      json problems = json::array();
      for (const FileProblem &p : result.problems)
        problems.push_back(
            {{"file", p.file}, {"kind", ErrorKindName(p.kind)}, {"message", p.message}});
      throw ApiError(422, "some files could not be ingested", problems);
    }
    if (result.corpus.utterances.empty()) throw ApiError(422, "no utterances found");
    Corpus corpus = CleanCorpus(result.corpus, clean);
    std::vector<FeatureMatrix> features = ComputeCorpusFeatures(corpus, FeatureConfig());
    SaveCorpus(corpus, dir / "corpus.json");
    WriteFeatureArchive(dir / "features.far", features);

    std::vector<std::string> names;
    for (const UploadedFile &f : files) names.push_back(fs::path(f.name).filename().string());
    json meta = {{"id", id},
                 {"name", name},
                 {"created_at", NowTimestamp()},
                 {"clean", CleanToJson(clean)},
                 {"tier", opts.tier ? json(*opts.tier) : json()},
                 {"files", names},
                 {"summary", SummaryToJson(Summarize(corpus))}};
    WriteJson(dir / "meta.json", meta);
    std::lock_guard<std::mutex> lock(mu_);
    datasets_[id] = meta;
    return meta;
  } catch (...) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    std::lock_guard<std::mutex> lock(mu_);
    datasets_.erase(id);
    throw;
  }
}

json Service::GetDataset(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = datasets_.find(id);
  if (it == datasets_.end() || it->second.contains("pending"))
    throw ApiError(404, "unknown dataset " + id);
  return it->second;
}

json Service::ListDatasets() const {
  std::lock_guard<std::mutex> lock(mu_);
  json out = json::array();
  for (const auto &[id, meta] : datasets_)
    if (!meta.contains("pending")) out.push_back(meta);
  return out;
}

// ---- models

const json &Service::ModelMeta(const std::string &id) const {
  auto it = models_.find(id);
  if (it == models_.end()) throw ApiError(404, "unknown model " + id);
  return it->second;
}

bool Service::ModelTrained(const json &meta) const {
  if (!fs::exists(ModelDir(meta["id"].get<std::string>()) / "model.ckpt")) return false;
  if (meta.value("imported", false)) return true;
  if (meta["latest_job"].is_null()) return false;
  auto it = jobs_.find(meta["latest_job"].get<std::string>());
  return it != jobs_.end() && it->second.record.state == JobState::kDone;
}

json Service::ModelView(const json &meta) const {
  json v = meta;
  std::string state = "untrained";
  if (!meta["latest_job"].is_null()) {
    auto it = jobs_.find(meta["latest_job"].get<std::string>());
    if (it != jobs_.end()) state = JobStateName(it->second.record.state);
  }
  if (ModelTrained(meta)) state = "trained";
  v["state"] = state;
  v["trained"] = state == "trained";
  return v;
}

json Service::CreateModel(const json &request) {
  if (!request.is_object()) throw ApiError(422, "model request must be a JSON object");
  std::string engine = request.value("engine", std::string(kEngineTag));
  if (engine != kEngineTag) throw ApiError(422, "unsupported engine '" + engine + "'");
  if (!request.contains("dataset_id") || !request["dataset_id"].is_string())
    throw ApiError(422, "dataset_id is required");
  std::string dataset_id = request["dataset_id"].get<std::string>();
  GetDataset(dataset_id);  // 404 when unknown

  ModelConfig mc;
  TrainConfig tc;
  double dev_fraction = 0.1;
  try {
    mc = ModelConfigFromJson(request.value("model", json::object()));
    json train = request.value("train", json::object());
    tc = TrainConfigFromJson(train);
    if (!train.contains("seed")) tc.seed = options_.seed;
    dev_fraction = request.value("dev_fraction", 0.1);
    mc.Validate();
    tc.Validate();
  } catch (const json::exception &e) {
    throw ApiError(422, std::string("bad model request: ") + e.what());
  } catch (const Error &e) {
    throw ApiError(422, e.what(), {{"kind", std::string(ErrorKindName(e.kind()))}});
  }
  if (!(dev_fraction >= 0.0 && dev_fraction < 1.0))
    throw ApiError(422, "dev_fraction must be in [0, 1)");

  std::lock_guard<std::mutex> lock(mu_);
  std::string id = NextId("m", models_);
  json meta = {{"id", id},
               {"name", request.value("name", std::string())},
               {"engine", engine},
               {"dataset_id", dataset_id},
               {"model", ToJson(mc)},
               {"train", ToJson(tc)},
               {"dev_fraction", dev_fraction},
               {"created_at", NowTimestamp()},
               {"latest_job", nullptr},
               {"imported", false}};
  fs::create_directories(ModelDir(id));
  SaveModel(meta);
  models_[id] = meta;
  return ModelView(meta);
}

json Service::GetModel(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return ModelView(ModelMeta(id));
}

json Service::ListModels() const {
  std::lock_guard<std::mutex> lock(mu_);
  json out = json::array();
  for (const auto &[id, meta] : models_) out.push_back(ModelView(meta));
  return out;
}

// ---- jobs

json Service::StartTraining(const std::string &model_id) {
  if (!options_.run_jobs) Fail(ErrorKind::kState, "this service instance does not run jobs");
  std::lock_guard<std::mutex> lock(mu_);
  auto found = models_.find(model_id);
  if (found == models_.end()) throw ApiError(404, "unknown model " + model_id);
  json &meta = found->second;
  if (meta["dataset_id"].is_null()) throw ApiError(422, "model " + model_id + " has no dataset");
  if (!meta["latest_job"].is_null()) {
    const Job &prev = jobs_.at(meta["latest_job"].get<std::string>());
    if (!IsTerminal(prev.record.state))
      throw ApiError(409, "model " + model_id + " already has " +
                              std::string(JobStateName(prev.record.state)) + " job " +
                              prev.record.id);
  }
  auto ds = datasets_.find(meta["dataset_id"].get<std::string>());
  if (ds == datasets_.end() || ds->second.contains("pending"))
    throw ApiError(422, "dataset of model " + model_id + " is missing");
  if (ds->second["summary"].value("utterances", 0) == 0)
    throw ApiError(422, "dataset is empty");

  std::vector<std::string> ids;
  for (const auto &[id, _] : jobs_) ids.push_back(id);
  std::string id = NextIdFrom("job", ids);
  fs::create_directories(JobDir(id));
  JobRecord record;
  record.id = id;
  record.model_id = model_id;
  record.created_at = NowTimestamp();
  Job job{record, std::make_shared<JobLog>(JobDir(id) / "log.txt")};
  job.log->Append("job " + id + " queued for model " + model_id);
  SaveJob(job);
  jobs_.emplace(id, job);
  meta["latest_job"] = id;
  SaveModel(meta);
  queue_.push_back(id);
  queue_cv_.notify_one();
  return JobToJson(record);
}

json Service::GetJob(const std::string &id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw ApiError(404, "unknown job " + id);
  json j = JobToJson(it->second.record);
  j["log_lines"] = it->second.log->size();
  return j;
}

json Service::ListJobs() const {
  std::lock_guard<std::mutex> lock(mu_);
  json out = json::array();
  for (const auto &[id, job] : jobs_) out.push_back(JobToJson(job.record));
  return out;
}

std::shared_ptr<JobLog> Service::JobLogFor(const std::string &job_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw ApiError(404, "unknown job " + job_id);
  return it->second.log;
}

bool Service::JobFinished(const std::string &job_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw ApiError(404, "unknown job " + job_id);
  return IsTerminal(it->second.record.state);
}

void Service::WaitIdle() {
  std::unique_lock<std::mutex> lock(mu_);
  idle_cv_.wait(lock, [&] { return queue_.empty() && busy_ == 0; });
}

void Service::WorkerLoop() {
  while (true) {
    std::string id;
    {
      std::unique_lock<std::mutex> lock(mu_);
      queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      ++busy_;
    }
    RunJob(id);
    {
      std::lock_guard<std::mutex> lock(mu_);
      --busy_;
    }
    idle_cv_.notify_all();
  }
}

void Service::Emit(const std::string &job_id, const std::string &line) {
  std::shared_ptr<JobLog> log = JobLogFor(job_id);
  log->Append(line);
  if (options_.on_log) options_.on_log(job_id, line);
}

void Service::RunJob(const std::string &job_id) {
  json model_meta, dataset_meta;
  {
    std::lock_guard<std::mutex> lock(mu_);
    Job &job = jobs_.at(job_id);
    Transition(job, JobState::kRunning);
    model_meta = models_.at(job.record.model_id);
    dataset_meta = datasets_.at(model_meta["dataset_id"].get<std::string>());
  }
  const std::string model_id = model_meta["id"].get<std::string>();
  std::vector<EpochMetrics> history;
  std::optional<std::string> error;
  try {
    Emit(job_id, "job " + job_id + " running");
    fs::path ds_dir = DatasetDir(dataset_meta["id"].get<std::string>());
    Corpus corpus = LoadCorpus(ds_dir / "corpus.json");
    std::vector<FeatureMatrix> features = ReadFeatureArchive(ds_dir / "features.far");
    TrainRequest request;
    request.model = ModelConfigFromJson(model_meta["model"]);
    request.train = TrainConfigFromJson(model_meta["train"]);
    request.dev_fraction = model_meta.value("dev_fraction", 0.1);
    Emit(job_id, "dataset " + dataset_meta["id"].get<std::string>() + ": " +
                     std::to_string(corpus.utterances.size()) + " utterances");
    TrainOutcome outcome = TrainOnCorpus(corpus, features, FeatureConfig(), request,
                                         [&](const std::string &line) {
                                           if (stopping_)
                                             Fail(ErrorKind::kState, "service shutting down");
                                           Emit(job_id, line);
                                         });
    history = outcome.history;
    SaveCheckpoint(outcome.model, ModelDir(model_id) / "model.ckpt");
    Emit(job_id, "checkpoint written for model " + model_id);
  } catch (const std::exception &e) {
    error = e.what();
  }
  std::lock_guard<std::mutex> lock(mu_);
  Job &job = jobs_.at(job_id);
  job.record.metrics = history;
  try {
    if (error) {
      job.log->Append("error: " + *error);
      job.record.error = error;
      Transition(job, JobState::kFailed);
    } else {
      job.log->Append("job " + job_id + " done");
      Transition(job, JobState::kDone);
    }
  } catch (const std::exception &e) {
    // Persisting the final state failed; keep the in-memory state honest.
    if (job.record.state == JobState::kRunning) {
      job.record.error = e.what();
      job.record.TransitionTo(JobState::kFailed);
    }
  }
  job.log->Close();
}

// ---- transcription and checkpoints

json Service::Transcribe(const std::string &model_id, const std::string &wav_bytes,
                         const DecodeOptions &options) {
  fs::path ckpt;
  {
    std::lock_guard<std::mutex> lock(mu_);
    const json &meta = ModelMeta(model_id);
    if (!ModelTrained(meta)) throw ApiError(409, "model " + model_id + " is not trained");
    ckpt = ModelDir(model_id) / "model.ckpt";
  }
  HybridModel model = LoadCheckpoint(ckpt);
  std::vector<double> samples;
  WaveInfo info;
  try {
    info = ParseWaveHeader(wav_bytes);
    samples = DecodeWav(wav_bytes, info.sample_rate);
  } catch (const Error &e) {
    throw ApiError(422, std::string("bad audio: ") + e.what());
  }
  Transcript t;
  try {
    t = TranscribeSamples(model, samples, info.sample_rate, options);
  } catch (const Error &e) {
    if (e.kind() == ErrorKind::kFormat || e.kind() == ErrorKind::kSize)
      throw ApiError(422, std::string("bad audio: ") + e.what());
    throw;
  }
  json windows = json::array();
  for (const TranscriptWindow &w : t.windows)
    windows.push_back({{"start", w.start_s}, {"end", w.end_s}, {"text", w.text}});
  return {{"model_id", model_id}, {"windows", windows}, {"text", t.text}};
}

std::string Service::ExportModel(const std::string &model_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  const json &meta = ModelMeta(model_id);
  if (!ModelTrained(meta)) throw ApiError(409, "model " + model_id + " is not trained");
  return ReadFileBytes(ModelDir(model_id) / "model.ckpt");
}

json Service::ImportModel(const std::string &bytes, const std::string &name) {
  std::optional<HybridModel> model;
  try {
    model.emplace(DecodeCheckpoint(bytes));
  } catch (const Error &e) {
    throw ApiError(422, std::string("invalid checkpoint: ") + e.what());
  }
  std::lock_guard<std::mutex> lock(mu_);
  std::string id = NextId("m", models_);
  fs::create_directories(ModelDir(id));
  WriteFileBytes(ModelDir(id) / "model.ckpt", bytes);
  json meta = {{"id", id},
               {"name", name},
               {"engine", kEngineTag},
               {"dataset_id", nullptr},
               {"model", ToJson(model->config())},
               {"train", nullptr},
               {"dev_fraction", nullptr},
               {"created_at", NowTimestamp()},
               {"latest_job", nullptr},
               {"imported", true},
               {"vocab_size", model->vocab_size()}};
  SaveModel(meta);
  models_[id] = meta;
  return ModelView(meta);
}

}  // namespace fieldasr
