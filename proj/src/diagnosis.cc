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

#include "lesion/diagnosis.h"

#include <algorithm>
#include <string>

#include "lesion/error.h"
#include "lesion/hashing.h"

namespace lesion {

Diagnosis MajorityVote(const RankedNeighbors& neighbors, const LabelLookup& labels,
                       uint32_t num_classes) {
  if (num_classes < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "majority vote needs at least 2 classes, got " +
                    std::to_string(num_classes));
  }
  Diagnosis d;
  d.neighbors = neighbors;
  d.k_used = neighbors.entries.size();
  d.class_votes.assign(num_classes, 0);
  std::vector<int32_t> ranked_labels;
  ranked_labels.reserve(neighbors.entries.size());
  for (const auto& n : neighbors.entries) {
    const int32_t label = labels(n.record_id);
    ranked_labels.push_back(label);
    if (label == kUnlabeled) continue;
    if (label < 0 || static_cast<uint32_t>(label) >= num_classes) {
      throw Error(ErrorCode::kUnknownLabel,
                  "record " + std::to_string(n.record_id) + " has label " +
                      std::to_string(label) + " outside " +
                      std::to_string(num_classes) + " classes");
    }
    ++d.class_votes[label];
  }
  const uint32_t top = *std::max_element(d.class_votes.begin(), d.class_votes.end());
  if (top == 0) {
    throw Error(ErrorCode::kNoLabeledEvidence, "no labeled evidence among neighbors");
  }
  for (int32_t label : ranked_labels) {
    if (label != kUnlabeled && d.class_votes[label] == top) {
      d.predicted_label = label;
      break;
    }
  }
  d.class_scores = ClassScoreVector(d);
  return d;
}

std::vector<double> ClassScoreVector(const Diagnosis& d) {
  uint64_t total = 0;
  for (uint32_t v : d.class_votes) total += v;
  std::vector<double> scores(d.class_votes.size(), 0.0);
  if (total == 0) return scores;
  for (size_t c = 0; c < scores.size(); ++c) {
    scores[c] = static_cast<double>(d.class_votes[c]) / static_cast<double>(total);
  }
  return scores;
}

CaseDatabase::CaseDatabase(CaseStore store)
    : store_(std::move(store)), index_(BallTreeIndex::Build(store_)) {
  row_of_.reserve(store_.size());
  for (size_t i = 0; i < store_.records.size(); ++i) {
    row_of_.emplace(store_.records[i].record_id, i);
    records_of_polyp_.emplace(store_.records[i].polyp_id, store_.records[i].record_id);
  }
}

std::vector<uint64_t> CaseDatabase::RecordIdsForPolyp(uint64_t polyp_id) const {
  std::vector<uint64_t> ids;
  auto [lo, hi] = records_of_polyp_.equal_range(polyp_id);
  for (auto it = lo; it != hi; ++it) ids.push_back(it->second);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const LesionRecord* CaseDatabase::Find(uint64_t record_id) const {
  auto it = row_of_.find(record_id);
  return it == row_of_.end() ? nullptr : &store_.records[it->second];
}

int32_t CaseDatabase::LabelOf(uint64_t record_id) const {
  const LesionRecord* r = Find(record_id);
  return r == nullptr ? kUnlabeled : r->label;
}

RankedNeighbors CaseDatabase::Search(const HashCode& query, size_t k,
                                     const ExcludeSet* exclude) const {
  if (exclude != nullptr && !exclude->empty()) {
    size_t excluded = 0;
    for (uint64_t id : *exclude) excluded += row_of_.contains(id) ? 1 : 0;
    if (excluded == store_.size()) {
      throw Error(ErrorCode::kEmptyCandidates,
                  "exclusion set removes every record from the store");
    }
  }
  return index_.Search(query, k, exclude);
}

namespace {

SceneEmbedding ToScene(const DiagnosisQuery& query, const FusionConfig& cfg) {
  if (const auto* scene = std::get_if<MultiViewScene>(&query)) {
    return FuseAverage(*scene, cfg);
  }
  return std::get<SceneEmbedding>(query);
}

}  // namespace

Retrieval Retrieve(const CaseDatabase& db, const DiagnosisQuery& query, size_t k,
                   const FusionConfig& cfg, const ExcludeSet* exclude) {
  const SceneEmbedding scene = ToScene(query, cfg);
  if (scene.values.size() != db.store().dimension) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dimension " + std::to_string(scene.values.size()) +
                    " does not match store dimension " +
                    std::to_string(db.store().dimension));
  }
  Retrieval out;
  out.code = SignQuantize(scene.values);
  out.neighbors = db.Search(out.code, k, exclude);
  return out;
}

Diagnosis Diagnose(const CaseDatabase& db, const DiagnosisQuery& query, size_t k,
                   const FusionConfig& cfg, const ExcludeSet* exclude) {
  Retrieval r = Retrieve(db, query, k, cfg, exclude);
  return MajorityVote(
      r.neighbors, [&db](uint64_t id) { return db.LabelOf(id); },
      db.store().label_space.num_classes);
}

}  // namespace lesion
