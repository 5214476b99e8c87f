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

#include "lesion/service/pipeline.h"

#include <algorithm>
#include <string>

#include "lesion/error.h"
#include "lesion/hashing.h"
#include "lesion/snapshot.h"

namespace lesion::service {
namespace {

std::string Str(uint64_t v) { return std::to_string(v); }

}  // namespace

IngestResult BuildStore(const io::EmbeddingFile& file,
                        const std::map<uint64_t, int32_t>& sidecar_labels,
                        const IngestOptions& options) {
  if (file.rows.empty()) throw Error(ErrorCode::kNoRecords, "no records");
  uint32_t dim = file.dimension;
  if (options.hash_bits) {
    if (*options.hash_bits == 0) {
      throw Error(ErrorCode::kInvalidArgument, "hash bits must be positive");
    }
    if (*options.hash_bits > file.dimension) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "hash bits " + std::to_string(*options.hash_bits) +
                      " exceed embedding dimension " + std::to_string(file.dimension));
    }
    dim = *options.hash_bits;
  }

  // polyp_id -> (scene, label from the file)
  std::map<uint64_t, MultiViewScene> scenes;
  for (const auto& row : file.rows) {
    if (row.label < kUnlabeled) {
      throw Error(ErrorCode::kUnknownLabel, "polyp " + Str(row.view.polyp_id) +
                                                " has unknown label value " +
                                                std::to_string(row.label));
    }
    auto& scene = scenes[row.view.polyp_id];
    scene.polyp_id = row.view.polyp_id;
    if (row.label != kUnlabeled) {
      if (scene.label != kUnlabeled && scene.label != row.label) {
        throw Error(ErrorCode::kLabelConflict,
                    "polyp " + Str(row.view.polyp_id) + " has views labeled " +
                        std::to_string(scene.label) + " and " +
                        std::to_string(row.label));
      }
      scene.label = row.label;
    }
    for (const auto& v : scene.views) {
      if (v.view_id == row.view.view_id) {
        throw Error(ErrorCode::kDuplicateView,
                    "duplicate view " + std::to_string(row.view.view_id) +
                        " for polyp " + Str(row.view.polyp_id));
      }
    }
    ViewEmbedding view = row.view;
    view.values.resize(dim);
    scene.views.push_back(std::move(view));
  }

  IngestResult out;
  for (const auto& [polyp_id, label] : sidecar_labels) {
    auto it = scenes.find(polyp_id);
    if (it == scenes.end()) {
      out.warnings.push_back("label sidecar names unknown polyp " + Str(polyp_id));
      continue;
    }
    if (it->second.label != kUnlabeled && it->second.label != label) {
      out.warnings.push_back("polyp " + Str(polyp_id) + ": sidecar label " +
                             std::to_string(label) + " overrides embedded label " +
                             std::to_string(it->second.label));
    }
    it->second.label = label;
  }

  std::vector<LesionRecord> records;
  records.reserve(scenes.size());
  for (const auto& [polyp_id, scene] : scenes) {
    const SceneEmbedding fused = FuseAverage(scene, options.fusion);
    records.push_back({polyp_id, polyp_id, SignQuantize(fused.values), scene.label});
  }
  out.store = MakeCaseStore(dim, std::move(records), options.index_params);
  return out;
}

size_t RunIngest(const std::string& embeddings_path, const std::string& labels_path,
                 const std::string& out_path, const IngestOptions& options,
                 std::vector<std::string>* warnings) {
  const io::EmbeddingFile file = io::ReadEmbeddingFile(embeddings_path);
  std::map<uint64_t, int32_t> labels;
  if (!labels_path.empty()) labels = io::ReadLabelSidecar(labels_path);
  IngestResult result = BuildStore(file, labels, options);
  SaveSnapshot(result.store, out_path);
  if (warnings != nullptr) *warnings = std::move(result.warnings);
  return result.store.size();
}

Metric ParseMetric(const std::string& name) {
  if (name == "hamming") return Metric::kHamming;
  if (name == "cosine") return Metric::kCosine;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + name + "' (expected hamming or cosine)");
}

const char* MetricName(Metric metric) {
  return metric == Metric::kHamming ? "hamming" : "cosine";
}

nlohmann::json QueryScene(const CaseDatabase& db, const MultiViewScene& scene,
                          const QueryOptions& options, bool report_polyp_id) {
  if (options.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  ExcludeSet exclude;
  if (options.exclude_self) {
    for (uint64_t id : db.RecordIdsForPolyp(scene.polyp_id)) exclude.insert(id);
  }
  const Retrieval r = Retrieve(db, scene, options.k, options.fusion,
                               exclude.empty() ? nullptr : &exclude);
  const uint32_t bits = db.store().hash_bits;

  nlohmann::json neighbors = nlohmann::json::array();
  for (const auto& n : r.neighbors.entries) {
    const LesionRecord* rec = db.Find(n.record_id);
    nlohmann::json e;
    e["record_id"] = n.record_id;
    e["polyp_id"] = rec->polyp_id;
    e["label"] = rec->label;
    if (options.metric == Metric::kHamming) {
      e["distance"] = n.distance;
    } else {
      e["distance"] = 1.0 - HammingToCosine(n.distance, bits);
    }
    neighbors.push_back(std::move(e));
  }

  nlohmann::json out;
  out["neighbors"] = std::move(neighbors);
  out["diagnosis"] = nullptr;
  const uint32_t classes = db.store().label_space.num_classes;
  if (classes >= 2) {
    try {
      const Diagnosis d = MajorityVote(
          r.neighbors, [&db](uint64_t id) { return db.LabelOf(id); }, classes);
      out["diagnosis"] = {{"label", d.predicted_label},
                          {"scores", d.class_scores},
                          {"votes", d.class_votes}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoLabeledEvidence) throw;
    }
  }
  if (report_polyp_id) out["query_polyp_id"] = scene.polyp_id;
  return out;
}

std::string SerializeLine(const nlohmann::json& j) { return j.dump() + "\n"; }

std::string RunQuery(const CaseDatabase& db, const io::EmbeddingFile& queries,
                     const QueryOptions& options) {
  std::vector<ViewEmbedding> views;
  views.reserve(queries.rows.size());
  for (const auto& row : queries.rows) views.push_back(row.view);
  std::string out;
  for (const auto& scene : GroupByPolyp(views)) {
    out += SerializeLine(QueryScene(db, scene, options));
  }
  return out;
}

}  // namespace lesion::service
