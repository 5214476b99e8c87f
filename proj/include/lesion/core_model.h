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

#ifndef LESION_CORE_MODEL_H_
#define LESION_CORE_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lesion/hashing.h"

namespace lesion {

using Vector = std::vector<double>;

inline constexpr int32_t kUnlabeled = -1;

// One encoder output for one endoscopic view of one polyp.
struct ViewEmbedding {
  uint64_t polyp_id = 0;
  uint32_t view_id = 0;
  Vector values;
};

// All available views of one polyp. The label is kUnlabeled when unknown.
struct MultiViewScene {
  uint64_t polyp_id = 0;
  std::vector<ViewEmbedding> views;
  int32_t label = kUnlabeled;

  // Throws kEmptyScene, kDimensionMismatch, kInvalidArgument (foreign
  // polyp_id), kDuplicateView or kNonFinite.
  void Validate() const;
  uint32_t dimension() const;
};

// Fused per-polyp vector.
struct SceneEmbedding {
  uint64_t polyp_id = 0;
  Vector values;
};

struct LabelSpace {
  uint32_t num_classes = 0;
  std::vector<std::string> class_names;

  bool Contains(int32_t label) const {
    return label == kUnlabeled ||
           (label >= 0 && static_cast<uint32_t>(label) < num_classes);
  }
  friend bool operator==(const LabelSpace&, const LabelSpace&) = default;
};

struct LesionRecord {
  uint64_t record_id = 0;
  uint64_t polyp_id = 0;
  HashCode code;
  int32_t label = kUnlabeled;

  friend bool operator==(const LesionRecord&, const LesionRecord&) = default;
};

// Ball tree construction parameters persisted alongside the store.
struct IndexParams {
  uint32_t leaf_size = 32;
  uint64_t build_seed = 0;

  friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

// The database of historical cases. Dimension and hash length are fixed for
// the lifetime of a store.
struct CaseStore {
  uint32_t dimension = 0;
  uint32_t hash_bits = 0;
  LabelSpace label_space;
  std::vector<LesionRecord> records;
  IndexParams index_params;

  size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  friend bool operator==(const CaseStore&, const CaseStore&) = default;
};

struct Violation {
  std::optional<uint64_t> record_id;
  std::string message;
};

// Reports every invariant violation; never throws.
std::vector<Violation> ValidateStore(const CaseStore& store);

// C = 1 + max label, ignoring kUnlabeled. Throws kNoLabels when no record is
// labeled, kUnknownLabel for labels below -1.
LabelSpace InferLabelSpace(std::span<const LesionRecord> records);

// Builds a store from records, inferring the label space when any record is
// labeled. The result always passes ValidateStore; throws kInvalidStore
// otherwise.
CaseStore MakeCaseStore(uint32_t dimension, std::vector<LesionRecord> records,
                        IndexParams params = {});

}  // namespace lesion

#endif  // LESION_CORE_MODEL_H_
