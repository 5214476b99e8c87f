// Copyright 2026 The Lesion Retrieval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LESION_SERVICE_HTTP_SERVER_H_
#define LESION_SERVICE_HTTP_SERVER_H_

#include <memory>

#include "lesion/service/query_service.h"

namespace lesion::service {

// HTTP/1.1 front end for a QueryService:
//
//   GET  /v1/health
//   GET  /v1/records/{id}[?include_code=true]
//   POST /v1/query
//
// Every response carries an X-Latency-Us header with the handler time.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const QueryService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds host:port from the service config (port 0 picks a free one) and
  // returns the bound port. Throws kIo on failure.
  int Bind();

  // Serves until Stop(); call after Bind().
  void Listen();

  // Safe from any thread; in-flight requests finish first.
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Loads the snapshot, binds, and serves until SIGINT or SIGTERM. Returns the
// process exit code; startup failures (bad snapshot, bind error) throw.
int RunServe(const ServiceConfig& cfg);

}  // namespace lesion::service

#endif  // LESION_SERVICE_HTTP_SERVER_H_
