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

#ifndef LESION_DIAGNOSIS_H_
#define LESION_DIAGNOSIS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lesion/ball_tree.h"
#include "lesion/core_model.h"
#include "lesion/fusion.h"

namespace lesion {

inline constexpr size_t kDefaultK = 6;

struct Diagnosis {
  int32_t predicted_label = kUnlabeled;
  std::vector<uint32_t> class_votes;
  std::vector<double> class_scores;
  RankedNeighbors neighbors;
  size_t k_used = 0;
};

using LabelLookup = std::function<int32_t(uint64_t record_id)>;

// Majority vote over the labeled neighbors. Ties go to the tied class whose
// first member appears earliest in the ranking. Unlabeled neighbors stay in
// the neighbor list but do not vote.
//
// Throws kInvalidArgument when num_classes < 2 and kNoLabeledEvidence when no
// neighbor carries a label.
Diagnosis MajorityVote(const RankedNeighbors& neighbors, const LabelLookup& labels,
                       uint32_t num_classes);

// votes_c / sum(votes); all zeros when nothing voted.
std::vector<double> ClassScoreVector(const Diagnosis& d);

// An immutable store together with its ball tree. Safe for concurrent reads.
class CaseDatabase {
 public:
  // Throws kEmptyStore / kInvalidStore.
  explicit CaseDatabase(CaseStore store);

  const CaseStore& store() const { return store_; }
  const BallTreeIndex& index() const { return index_; }

  // nullptr when absent.
  const LesionRecord* Find(uint64_t record_id) const;
  int32_t LabelOf(uint64_t record_id) const;
  // Every record stored for the polyp, ascending; empty when unknown.
  std::vector<uint64_t> RecordIdsForPolyp(uint64_t polyp_id) const;

  RankedNeighbors Search(const HashCode& query, size_t k,
                         const ExcludeSet* exclude = nullptr) const;

 private:
  CaseStore store_;
  BallTreeIndex index_;
  std::unordered_map<uint64_t, size_t> row_of_;
  std::unordered_multimap<uint64_t, uint64_t> records_of_polyp_;
};

using DiagnosisQuery = std::variant<MultiViewScene, SceneEmbedding>;

struct Retrieval {
  HashCode code;
  RankedNeighbors neighbors;
};

// Fuses (multi-view queries only), quantizes and searches. Throws
// kDimensionMismatch when the query dimension differs from the store's and
// kEmptyCandidates when the exclusion set removes every record.
Retrieval Retrieve(const CaseDatabase& db, const DiagnosisQuery& query, size_t k,
                   const FusionConfig& cfg = {}, const ExcludeSet* exclude = nullptr);

// Retrieve followed by MajorityVote.
Diagnosis Diagnose(const CaseDatabase& db, const DiagnosisQuery& query,
                   size_t k = kDefaultK, const FusionConfig& cfg = {},
                   const ExcludeSet* exclude = nullptr);

}  // namespace lesion

#endif  // LESION_DIAGNOSIS_H_
