// service/http-api.cc

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

#include "service/http-api.h"

#include <csignal>
#include <cstdio>
#include <functional>

#include "httplib.h"

#include "base/error.h"

namespace fieldasr {

using nlohmann::json;

namespace {

void SendJson(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs fn, turning failures into JSON error responses.
void Guard(httplib::Response &res, const std::function<void()> &fn) {
  try {
    fn();
  } catch (const ApiError &e) {
    SendJson(res, e.status(), e.body());
  } catch (const Error &e) {
    SendJson(res, StatusForError(e.kind()),
             {{"error", e.what()}, {"kind", ErrorKindName(e.kind())}});
  } catch (const std::exception &e) {
    SendJson(res, 500, {{"error", e.what()}});
  }
}

json ParseBody(const std::string &body) {
  if (body.empty()) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ApiError(422, "request body is not valid JSON");
  return j;
}

// The named multipart file when present, the raw body otherwise.
std::string UploadOrBody(const httplib::Request &req, const char *field) {
  if (req.is_multipart_form_data()) {
    if (!req.has_file(field)) throw ApiError(422, std::string("missing upload field '") + field + "'");
    return req.get_file_value(field).content;
  }
  return req.body;
}

double QueryDouble(const httplib::Request &req, const char *key, double fallback) {
  if (!req.has_param(key)) return fallback;
  std::string v = req.get_param_value(key);
  char *end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw ApiError(422, std::string("bad ") + key + " '" + v + "'");
  return d;
}

httplib::Server *g_server = nullptr;

extern "C" void StopOnSignal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

void RegisterRoutes(httplib::Server &server, Service &service) {
  server.Get("/healthz", [](const httplib::Request &, httplib::Response &res) {
    SendJson(res, 200, {{"status", "ok"}, {"engine", kEngineTag}});
  });

  server.Post("/datasets", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] {
      if (!req.is_multipart_form_data()) throw ApiError(422, "expected a multipart upload");
      std::vector<UploadedFile> files;
      json config = json::object();
      for (const auto &[key, part] : req.files) {
        if (key == "config") {
          config = ParseBody(part.content);
        } else {
          files.push_back({part.filename.empty() ? key : part.filename, part.content});
        }
      }
      SendJson(res, 201, service.CreateDataset(files, config));
    });
  });
  server.Get("/datasets", [&](const httplib::Request &, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 200, service.ListDatasets()); });
  });
  server.Get(R"(/datasets/([^/]+))", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 200, service.GetDataset(req.matches[1])); });
  });

  server.Post("/models", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 201, service.CreateModel(ParseBody(req.body))); });
  });
  server.Get("/models", [&](const httplib::Request &, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 200, service.ListModels()); });
  });
  server.Post("/models/import", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] {
      std::string name = req.has_param("name") ? req.get_param_value("name") : "";
      SendJson(res, 201, service.ImportModel(UploadOrBody(req, "checkpoint"), name));
    });
  });
  server.Get(R"(/models/([^/]+))", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 200, service.GetModel(req.matches[1])); });
  });
  server.Post(R"(/models/([^/]+)/train)", [&](const httplib::Request &req,
                                              httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 202, service.StartTraining(req.matches[1])); });
  });
  server.Post(R"(/models/([^/]+)/transcribe)", [&](const httplib::Request &req,
                                                   httplib::Response &res) {
    Guard(res, [&] {
      DecodeOptions opt;
      opt.beam = static_cast<int>(QueryDouble(req, "beam", opt.beam));
      opt.ctc_weight = QueryDouble(req, "ctc_weight", opt.ctc_weight);
      if (opt.beam < 1) throw ApiError(422, "beam must be >= 1");
      if (!(opt.ctc_weight >= 0.0 && opt.ctc_weight <= 1.0))
        throw ApiError(422, "ctc_weight must be in [0, 1]");
      SendJson(res, 200, service.Transcribe(req.matches[1], UploadOrBody(req, "audio"), opt));
    });
  });
  server.Get(R"(/models/([^/]+)/export)", [&](const httplib::Request &req,
                                              httplib::Response &res) {
    Guard(res, [&] {
      std::string id = req.matches[1];
      res.set_content(service.ExportModel(id), "application/octet-stream");
      res.set_header("Content-Disposition", "attachment; filename=\"" + id + ".ckpt\"");
    });
  });

  server.Get("/jobs", [&](const httplib::Request &, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 200, service.ListJobs()); });
  });
  server.Get(R"(/jobs/([^/]+))", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] { SendJson(res, 200, service.GetJob(req.matches[1])); });
  });
  server.Get(R"(/jobs/([^/]+)/logs)", [&](const httplib::Request &req, httplib::Response &res) {
    Guard(res, [&] {
      std::shared_ptr<JobLog> log = service.JobLogFor(req.matches[1]);
      double from = QueryDouble(req, "from", 0.0);
      if (from < 0 || from != static_cast<double>(static_cast<size_t>(from)))
        throw ApiError(422, "from must be a non-negative integer");
      auto next = std::make_shared<size_t>(static_cast<size_t>(from));
      res.set_chunked_content_provider(
          "text/plain; charset=utf-8", [log, next](size_t, httplib::DataSink &sink) {
            std::vector<std::string> lines = log->Read(*next, 256);
            if (!lines.empty()) {
              std::string chunk;
              for (const std::string &l : lines) chunk += FormatLogLine((*next)++, l);
              return sink.write(chunk.data(), chunk.size());
            }
            // Closed means the job is terminal and every line is in.
            if (log->closed() && log->size() <= *next) {
              sink.done();
              return true;
            }
            log->WaitBeyond(*next, std::chrono::milliseconds(200));
            return true;
          });
    });
  });
}

int RunService(ServiceOptions options, const std::string &host, int port) {
  Service service(std::move(options));
  httplib::Server server;
  RegisterRoutes(server, service);
  if (!server.bind_to_port(host, port)) {
    std::fprintf(stderr, "cannot listen on %s:%d\n", host.c_str(), port);
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, StopOnSignal);
  std::signal(SIGTERM, StopOnSignal);
  std::printf("listening on %s:%d\n", host.c_str(), port);
  std::fflush(stdout);
  server.listen_after_bind();
  g_server = nullptr;
  return 0;
}

}  // namespace fieldasr
