// service/service.h

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

#ifndef FIELDASR_SERVICE_SERVICE_H_
#define FIELDASR_SERVICE_SERVICE_H_

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "base/error.h"
#include "model/model-config.h"
#include "service/job-log.h"
#include "service/job.h"

namespace fieldasr {

inline constexpr const char *kEngineTag = "hybrid-ctc-attention";

// A request-level failure with its HTTP status and JSON body.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, const std::string &message, nlohmann::json details = nullptr);
  int status() const { return status_; }
  const nlohmann::json &body() const { return body_; }

 private:
  int status_;
  nlohmann::json body_;
};

// Status for a library error reaching the API: not found 404, illegal
// state 409, I/O 500, everything else (bad input) 422.
int StatusForError(ErrorKind kind);

struct UploadedFile {
  std::string name;
  std::string bytes;
};

struct ServiceOptions {
  std::filesystem::path state_dir;
  int workers = 1;
  uint64_t seed = 0;  // default training seed when a model does not set one
  // false: no workers and no restart recovery, for offline tools that only
  // read models or add imports. Jobs found on disk are left as they are.
  bool run_jobs = true;
  // Test hooks. on_log runs after every job log line and may throw to make
  // the job fail; on_transition sees every job state change.
  std::function<void(const std::string &job_id, const std::string &line)> on_log;
  std::function<void(const std::string &job_id, JobState from, JobState to)> on_transition;
};

/// Datasets, models and training jobs persisted under state_dir, one
/// directory per entity with a meta.json. Jobs run on a FIFO queue served by
/// `workers` threads. On start, queued jobs are queued again and jobs that
/// were running are marked failed.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  // config: {"name", "tier", "clean": {"remove_chars", "collapse_whitespace",
  // "lowercase"}}. Files are .eaf / .xml transcriptions, .wav audio and an
  // optional genres.txt manifest.
  nlohmann::json CreateDataset(const std::vector<UploadedFile> &files,
                               const nlohmann::json &config);
  nlohmann::json GetDataset(const std::string &id) const;
  nlohmann::json ListDatasets() const;

  // {"dataset_id", "name", "engine", "model": {...}, "train": {...},
  //  "dev_fraction"}
  nlohmann::json CreateModel(const nlohmann::json &request);
  nlohmann::json GetModel(const std::string &id) const;
  nlohmann::json ListModels() const;

  nlohmann::json StartTraining(const std::string &model_id);
  nlohmann::json GetJob(const std::string &id) const;
  nlohmann::json ListJobs() const;
  std::shared_ptr<JobLog> JobLogFor(const std::string &job_id) const;
  bool JobFinished(const std::string &job_id) const;

  nlohmann::json Transcribe(const std::string &model_id, const std::string &wav_bytes,
                            const DecodeOptions &options);
  std::string ExportModel(const std::string &model_id) const;
  nlohmann::json ImportModel(const std::string &checkpoint_bytes, const std::string &name);

  // Blocks until the queue is empty and no job runs.
  void WaitIdle();

 private:
  struct Job {
    JobRecord record;
    std::shared_ptr<JobLog> log;
  };

  void Load();
  void WorkerLoop();
  void RunJob(const std::string &job_id);
  void Transition(Job &job, JobState next);  // mu_ held
  void SaveJob(const Job &job) const;
  void Emit(const std::string &job_id, const std::string &line);
  void SaveModel(const nlohmann::json &meta) const;
  std::string NextId(const char *prefix, const std::map<std::string, nlohmann::json> &m) const;
  bool ModelTrained(const nlohmann::json &meta) const;
  nlohmann::json ModelView(const nlohmann::json &meta) const;
  const nlohmann::json &ModelMeta(const std::string &id) const;

  std::filesystem::path DatasetDir(const std::string &id) const;
  std::filesystem::path ModelDir(const std::string &id) const;
  std::filesystem::path JobDir(const std::string &id) const;

  ServiceOptions options_;
  mutable std::mutex mu_;
  std::condition_variable queue_cv_, idle_cv_;
  std::map<std::string, nlohmann::json> datasets_;
  std::map<std::string, nlohmann::json> models_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  int busy_ = 0;
  std::atomic<bool> stopping_{false};
  std::vector<std::thread> workers_;
};

}  // namespace fieldasr

#endif  // FIELDASR_SERVICE_SERVICE_H_
