// service/job-log.cc

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

#include "service/job-log.h"

#include <algorithm>

#include "base/error.h"

namespace fieldasr {

JobLog::JobLog(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(file_);
  std::string line;
  while (std::getline(in, line)) lines_.push_back(line);
  out_.open(file_, std::ios::app | std::ios::binary);
  if (!out_) Fail(ErrorKind::kIo, "cannot open log ", file_.string());
}

size_t JobLog::Append(std::string line) {
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::replace(line.begin(), line.end(), '\r', ' ');
  std::lock_guard<std::mutex> lock(mu_);
  if (closed_) Fail(ErrorKind::kState, "append to a closed log");
  out_ << line << '\n';
  out_.flush();
  if (!out_) Fail(ErrorKind::kIo, "write failed for ", file_.string());
  lines_.push_back(std::move(line));
  cv_.notify_all();
  return lines_.size() - 1;
}

void JobLog::Close() {
  std::lock_guard<std::mutex> lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

size_t JobLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return lines_.size();
}

bool JobLog::closed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return closed_;
}

std::vector<std::string> JobLog::Read(size_t from, size_t max) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (from >= lines_.size()) return {};
  size_t end = lines_.size() - from > max ? from + max : lines_.size();
  return {lines_.begin() + from, lines_.begin() + end};
}

bool JobLog::WaitBeyond(size_t from, std::chrono::milliseconds timeout) const {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return lines_.size() > from || closed_; });
  return lines_.size() > from;
}

std::string FormatLogLine(size_t seq, const std::string &text) {
  return "seq " + std::to_string(seq) + " " + text + "\n";
}

}  // namespace fieldasr
