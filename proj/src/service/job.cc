// service/job.cc

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

#include "service/job.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "base/error.h"

namespace fieldasr {

std::string_view JobStateName(JobState s) {
  switch (s) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "?";
}

JobState ParseJobState(std::string_view name) {
  for (JobState s : {JobState::kQueued, JobState::kRunning, JobState::kDone, JobState::kFailed})
    if (JobStateName(s) == name) return s;
  Fail(ErrorKind::kParse, "unknown job state '", std::string(name), "'");
}

bool IsLegalTransition(JobState from, JobState to) {
  return (from == JobState::kQueued && to == JobState::kRunning) ||
         (from == JobState::kRunning && (to == JobState::kDone || to == JobState::kFailed));
}

std::string NowTimestamp() {
  using namespace std::chrono;
  auto now = system_clock::now();
  std::time_t secs = system_clock::to_time_t(now);
  int ms = static_cast<int>(duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
  return buf;
}

void JobRecord::TransitionTo(JobState next) {
  if (!IsLegalTransition(state, next))
    Fail(ErrorKind::kState, "job ", id, ": illegal transition ", JobStateName(state), " -> ",
         JobStateName(next));
  state = next;
  if (next == JobState::kRunning) started_at = NowTimestamp();
  if (IsTerminal(next)) finished_at = NowTimestamp();
}

namespace {

// JSON has no NaN; an absent dev set is written as null.
nlohmann::json MaybeNumber(double v) { return std::isnan(v) ? nlohmann::json() : nlohmann::json(v); }
double FromMaybe(const nlohmann::json &j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace

nlohmann::json JobToJson(const JobRecord &job) {
  nlohmann::json metrics = nlohmann::json::array();
  for (const EpochMetrics &m : job.metrics)
    metrics.push_back({{"epoch", m.epoch},
                       {"train_loss", MaybeNumber(m.train_loss)},
                       {"train_cer", MaybeNumber(m.train_cer)},
                       {"dev_cer", MaybeNumber(m.dev_cer)}});
  nlohmann::json j = {{"id", job.id},
                      {"model_id", job.model_id},
                      {"state", JobStateName(job.state)},
                      {"created_at", job.created_at},
                      {"started_at", nullptr},
                      {"finished_at", nullptr},
                      {"error", nullptr},
                      {"metrics", metrics}};
  if (job.started_at) j["started_at"] = *job.started_at;
  if (job.finished_at) j["finished_at"] = *job.finished_at;
  if (job.error) j["error"] = *job.error;
  return j;
}

JobRecord JobFromJson(const nlohmann::json &j) {
  try {
    JobRecord job;
    job.id = j.at("id").get<std::string>();
    job.model_id = j.at("model_id").get<std::string>();
    job.state = ParseJobState(j.at("state").get<std::string>());
    job.created_at = j.at("created_at").get<std::string>();
    if (!j.at("started_at").is_null()) job.started_at = j["started_at"].get<std::string>();
    if (!j.at("finished_at").is_null()) job.finished_at = j["finished_at"].get<std::string>();
    if (!j.at("error").is_null()) job.error = j["error"].get<std::string>();
    for (const auto &m : j.at("metrics"))
      job.metrics.push_back({m.at("epoch").get<int>(), FromMaybe(m.at("train_loss")),
                             FromMaybe(m.at("train_cer")), FromMaybe(m.at("dev_cer"))});
    return job;
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorKind::kParse, "bad job record: ", e.what());
  }
}

}  // namespace fieldasr
