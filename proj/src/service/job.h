// service/job.h

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

#ifndef FIELDASR_SERVICE_JOB_H_
#define FIELDASR_SERVICE_JOB_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "model/trainer.h"

namespace fieldasr {

enum class JobState { kQueued, kRunning, kDone, kFailed };

std::string_view JobStateName(JobState s);
JobState ParseJobState(std::string_view name);  // kParse on unknown names
// queued -> running -> {done, failed}; nothing else.
bool IsLegalTransition(JobState from, JobState to);
inline bool IsTerminal(JobState s) { return s == JobState::kDone || s == JobState::kFailed; }

// UTC, millisecond resolution, e.g. 2026-03-01T12:00:00.250Z.
std::string NowTimestamp();

struct JobRecord {
  std::string id;
  std::string model_id;
  JobState state = JobState::kQueued;
  std::string created_at;
  std::optional<std::string> started_at, finished_at;
  std::optional<std::string> error;
  std::vector<EpochMetrics> metrics;

  // Throws kState for an illegal transition; stamps started/finished.
  void TransitionTo(JobState next);
};

nlohmann::json JobToJson(const JobRecord &job);
JobRecord JobFromJson(const nlohmann::json &j);

}  // namespace fieldasr

#endif  // FIELDASR_SERVICE_JOB_H_
