// service/http-api.h

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

#ifndef FIELDASR_SERVICE_HTTP_API_H_
#define FIELDASR_SERVICE_HTTP_API_H_

#include <string>

#include "service/service.h"

namespace httplib {
class Server;
}

namespace fieldasr {

// Endpoints (JSON bodies unless noted):
//   GET  /healthz
//   POST /datasets                multipart: files + "config" JSON field
//   GET  /datasets, /datasets/{id}
//   POST /models                  {"dataset_id", "model", "train", ...}
//   GET  /models, /models/{id}
//   POST /models/{id}/train
//   GET  /jobs, /jobs/{id}
//   GET  /jobs/{id}/logs?from=<seq>   chunked text, "seq <n> <line>" per line
//   POST /models/{id}/transcribe  WAV as multipart "audio" or raw body
//   GET  /models/{id}/export      checkpoint bytes
//   POST /models/import           checkpoint as multipart "checkpoint" or raw body
void RegisterRoutes(httplib::Server &server, Service &service);

// Runs until SIGINT/SIGTERM. Returns a process exit code.
int RunService(ServiceOptions options, const std::string &host, int port);

}  // namespace fieldasr

#endif  // FIELDASR_SERVICE_HTTP_API_H_
