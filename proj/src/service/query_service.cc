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

#include "lesion/service/query_service.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "json.hpp"

#include "lesion/error.h"

namespace lesion::service {
namespace {

using nlohmann::json;

Error BadRequest(const std::string& message) {
  return Error(ErrorCode::kInvalidArgument, message);
}

Vector ParseValues(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw BadRequest(where + " must be an array of numbers");
  Vector values;
  values.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number()) throw BadRequest(where + " must contain only numbers");
    // Same f32 round trip as the binary embedding file.
    const auto f = static_cast<float>(x.get<double>());
    if (!std::isfinite(f)) {
      throw Error(ErrorCode::kNonFinite, where + " contains a value outside f32 range");
    }
    values.push_back(f);
  }
  return values;
}

template <typename T>
T GetUnsigned(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw BadRequest(std::string("\"") + key + "\" must be a non-negative integer");
  }
  return v.get<T>();
}

}  // namespace

void ServiceConfig::Validate() const {
  if (default_k < 1) throw BadRequest("default k must be at least 1");
  if (default_k > max_k) throw BadRequest("default k exceeds max k");
  if (port < 0 || port > 65535) {
    throw BadRequest("port " + std::to_string(port) + " out of range");
  }
  if (max_body_bytes == 0 || max_views == 0) throw BadRequest("limits must be positive");
}

std::string ErrorBody(const std::string& code, const std::string& message) {
  json j;
  j["error"] = {{"code", code}, {"message", message}};
  return SerializeLine(j);
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kIo:
    case ErrorCode::kInvalidStore:
      return 500;
    default:
      return 400;
  }
}

QueryService::QueryService(std::shared_ptr<const CaseDatabase> db, ServiceConfig cfg)
    : db_(std::move(db)), cfg_(std::move(cfg)) {
  cfg_.Validate();
  if (db_ == nullptr) throw BadRequest("service needs a database");
}

Response QueryService::Health() const {
  json j;
  j["status"] = "ok";
  j["records"] = db_->store().size();
  j["k_bits"] = db_->store().hash_bits;
  return {200, SerializeLine(j)};
}

Response QueryService::Record(const std::string& id_text, bool include_code) const {
  uint64_t id = 0;
  const auto [end, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
  if (ec != std::errc() || end != id_text.data() + id_text.size()) {
    return {400, ErrorBody("invalid_argument", "record id must be an unsigned integer")};
  }
  const LesionRecord* rec = db_->Find(id);
  if (rec == nullptr) {
    return {404, ErrorBody("not_found", "no record " + id_text)};
  }
  json j;
  j["record_id"] = rec->record_id;
  j["polyp_id"] = rec->polyp_id;
  j["label"] = rec->label;
  j["k_bits"] = rec->code.num_bits();
  if (include_code) {
    std::string hex;
    char buf[17];
    for (uint64_t w : rec->code.words()) {
      std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(w));
      hex += buf;
    }
    j["code"] = hex;
  }
  return {200, SerializeLine(j)};
}

Response QueryService::Query(const std::string& body) const {
  try {
    if (body.size() > cfg_.max_body_bytes) {
      return {413, ErrorBody("payload_too_large", "request body exceeds " +
                                                      std::to_string(cfg_.max_body_bytes) +
                                                      " bytes")};
    }
    const json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) {
      throw Error(ErrorCode::kParse, "request body is not a JSON object");
    }

    MultiViewScene scene;
    const bool has_polyp = req.contains("polyp_id");
    if (has_polyp) scene.polyp_id = GetUnsigned<uint64_t>(req, "polyp_id");
    const bool has_embeddings = req.contains("embeddings");
    const bool has_views = req.contains("views");
    if (has_embeddings == has_views) {
      throw BadRequest("exactly one of \"embeddings\" or \"views\" is required");
    }
    const json& rows = has_embeddings ? req["embeddings"] : req["views"];
    if (!rows.is_array() || rows.empty()) throw BadRequest("no query views given");
    if (rows.size() > cfg_.max_views) {
      throw BadRequest("at most " + std::to_string(cfg_.max_views) + " views per query");
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      ViewEmbedding v;
      v.polyp_id = scene.polyp_id;
      if (has_embeddings) {
        v.view_id = static_cast<uint32_t>(i);
        v.values = ParseValues(rows[i], "embeddings[" + std::to_string(i) + "]");
      } else {
        if (!rows[i].is_object() || !rows[i].contains("values")) {
          throw BadRequest("views[" + std::to_string(i) + "] needs \"values\"");
        }
        v.view_id = rows[i].contains("view_id")
                        ? GetUnsigned<uint32_t>(rows[i], "view_id")
                        : static_cast<uint32_t>(i);
        v.values = ParseValues(rows[i]["values"], "views[" + std::to_string(i) + "]");
      }
      scene.views.push_back(std::move(v));
    }

    QueryOptions opts;
    opts.k = req.contains("k") ? GetUnsigned<size_t>(req, "k") : cfg_.default_k;
    if (opts.k < 1 || opts.k > cfg_.max_k) {
      throw BadRequest("k must be in [1, " + std::to_string(cfg_.max_k) + "]");
    }
    opts.metric = cfg_.metric;
    if (req.contains("metric")) {
      if (!req["metric"].is_string()) throw BadRequest("\"metric\" must be a string");
      opts.metric = ParseMetric(req["metric"].get<std::string>());
    }
    if (req.contains("exclude_self")) {
      if (!req["exclude_self"].is_boolean()) {
        throw BadRequest("\"exclude_self\" must be a boolean");
      }
      opts.exclude_self = req["exclude_self"].get<bool>();
      if (opts.exclude_self && !has_polyp) {
        throw BadRequest("\"exclude_self\" requires \"polyp_id\"");
      }
    }
    opts.fusion = cfg_.fusion;
    return {200, SerializeLine(QueryScene(*db_, scene, opts, has_polyp))};
  } catch (const Error& e) {
    return {HttpStatusFor(e.code()), ErrorBody(std::string(ErrorCodeName(e.code())), e.what())};
  } catch (const json::exception& e) {
    return {400, ErrorBody(std::string(ErrorCodeName(ErrorCode::kParse)), e.what())};
  }
}

}  // namespace lesion::service
