// service/job-log.h

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

#ifndef FIELDASR_SERVICE_JOB_LOG_H_
#define FIELDASR_SERVICE_JOB_LOG_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

namespace fieldasr {

// Append-only, file-backed list of log lines. Line n has sequence number n
// (from 0). One writer, any number of readers; readers can block until a
// line beyond their position exists or the log is closed.
class JobLog {
 public:
  // Loads any lines already in the file.
  explicit JobLog(std::filesystem::path file);

  // Newlines inside `line` become spaces. Returns the line's sequence number.
  size_t Append(std::string line);
  void Close();

  size_t size() const;
  bool closed() const;
  // Lines [from, from + max).
  std::vector<std::string> Read(size_t from, size_t max = SIZE_MAX) const;
  // True once size() > from; false on close or timeout.
  bool WaitBeyond(size_t from, std::chrono::milliseconds timeout) const;

 private:
  std::filesystem::path file_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<std::string> lines_;
  std::ofstream out_;
  bool closed_ = false;
};

// "seq <n> <text>\n"
std::string FormatLogLine(size_t seq, const std::string &text);

}  // namespace fieldasr

#endif  // FIELDASR_SERVICE_JOB_LOG_H_
