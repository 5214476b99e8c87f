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

#ifndef LESION_SERVICE_QUERY_SERVICE_H_
#define LESION_SERVICE_QUERY_SERVICE_H_

#include <cstdint>
#include <memory>
#include <string>

#include "lesion/diagnosis.h"
#include "lesion/error.h"
#include "lesion/service/pipeline.h"

namespace lesion::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string snapshot_path;
  size_t default_k = kDefaultK;
  Metric metric = Metric::kHamming;
  size_t max_body_bytes = 16u << 20;
  size_t max_k = 1000;
  size_t max_views = 64;
  FusionConfig fusion;

  // Throws kInvalidArgument.
  void Validate() const;
};

struct Response {
  int status = 200;
  std::string body;
};

// Transport-independent request handling over one immutable database.
// Every method is const and safe to call from many threads at once.
class QueryService {
 public:
  QueryService(std::shared_ptr<const CaseDatabase> db, ServiceConfig cfg);

  const CaseDatabase& db() const { return *db_; }
  const ServiceConfig& config() const { return cfg_; }

  // {"k_bits": K, "records": N, "status": "ok"}
  Response Health() const;

  // Record metadata; the packed code (hex, word 0 first) only on request.
  Response Record(const std::string& id_text, bool include_code) const;

  // Body: {"embeddings": [[f32...], ...]} (one row per view of a single
  // polyp) or {"views": [{"view_id": u32, "values": [...]}, ...]}, plus
  // optional "polyp_id", "k", "metric", "exclude_self". Values are narrowed
  // to f32 exactly as the embedding file stores them, so the response is
  // byte-identical to the CLI's line for the same input.
  Response Query(const std::string& body) const;

 private:
  std::shared_ptr<const CaseDatabase> db_;
  ServiceConfig cfg_;
};

// {"error": {"code": "<machine code>", "message": "..."}}
std::string ErrorBody(const std::string& code, const std::string& message);

// 400 for caller errors, 404 for kNotFound, 500 otherwise.
int HttpStatusFor(ErrorCode code);

}  // namespace lesion::service

#endif  // LESION_SERVICE_QUERY_SERVICE_H_
