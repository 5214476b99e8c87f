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

#ifndef LESION_SERVICE_PIPELINE_H_
#define LESION_SERVICE_PIPELINE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lesion/core_model.h"
#include "lesion/diagnosis.h"
#include "lesion/fusion.h"
#include "lesion/io/embedding_file.h"

namespace lesion::service {

struct IngestOptions {
  FusionConfig fusion;
  // Keep only the first K components of every view before fusion; the store
  // dimension and code length become K. Unset means K = D.
  std::optional<uint32_t> hash_bits;
  IndexParams index_params;
};

struct IngestResult {
  CaseStore store;
  std::vector<std::string> warnings;
};

// Groups views by polyp, resolves labels, fuses and quantizes. One record per
// polyp with record_id = polyp_id, sorted by polyp_id. Sidecar labels override
// per-view labels (a differing override is reported as a warning).
//
// Throws kNoRecords for an empty file, kDuplicateView, kLabelConflict when one
// polyp's views disagree, kUnknownLabel for labels below -1 and
// kDimensionMismatch when hash_bits exceeds the embedding dimension.
IngestResult BuildStore(const io::EmbeddingFile& file,
                        const std::map<uint64_t, int32_t>& sidecar_labels,
                        const IngestOptions& options = {});

// File-level wrapper: reads, builds and writes the snapshot. An empty
// labels_path means no sidecar. Returns the record count.
size_t RunIngest(const std::string& embeddings_path, const std::string& labels_path,
                 const std::string& out_path, const IngestOptions& options,
                 std::vector<std::string>* warnings = nullptr);

enum class Metric { kHamming, kCosine };

// Throws kInvalidArgument for anything but "hamming" / "cosine".
Metric ParseMetric(const std::string& name);
const char* MetricName(Metric metric);

struct QueryOptions {
  size_t k = kDefaultK;
  Metric metric = Metric::kHamming;
  // Drop every record of the query's own polyp from the candidates.
  bool exclude_self = false;
  FusionConfig fusion;
};

// The shared query core behind both the CLI and the HTTP service. Produces
//
//   {"diagnosis": {"label", "scores", "votes"} | null,
//    "neighbors": [{"distance", "label", "polyp_id", "record_id"}, ...],
//    "query_polyp_id": id}            // only when report_polyp_id is set
//
// Hamming distances are integers; the cosine metric reports 1 - cosine of
// the codes, i.e. 2h/K. The diagnosis is null when the store has fewer than
// two classes or no neighbor is labeled.
nlohmann::json QueryScene(const CaseDatabase& db, const MultiViewScene& scene,
                          const QueryOptions& options, bool report_polyp_id = true);

// Compact single-line serialization with sorted keys and a trailing newline.
std::string SerializeLine(const nlohmann::json& j);

// One line per query polyp, in order of first appearance in the file.
std::string RunQuery(const CaseDatabase& db, const io::EmbeddingFile& queries,
                     const QueryOptions& options);

}  // namespace lesion::service

#endif  // LESION_SERVICE_PIPELINE_H_
