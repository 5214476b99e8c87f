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

#include "lesion/core_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <unordered_set>

#include "lesion/error.h"

namespace lesion {

uint32_t MultiViewScene::dimension() const {
  return views.empty() ? 0 : static_cast<uint32_t>(views.front().values.size());
}

void MultiViewScene::Validate() const {
  if (views.empty()) {
    throw Error(ErrorCode::kEmptyScene,
                "polyp " + std::to_string(polyp_id) + " has no views");
  }
  const size_t dim = views.front().values.size();
  if (dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "polyp " + std::to_string(polyp_id) + " has zero-dimensional views");
  }
  std::set<uint32_t> seen;
  for (const auto& v : views) {
    if (v.polyp_id != polyp_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "view of polyp " + std::to_string(v.polyp_id) +
                      " inside scene " + std::to_string(polyp_id));
    }
    if (v.values.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "polyp " + std::to_string(polyp_id) + " view " +
                      std::to_string(v.view_id) + " has dimension " +
                      std::to_string(v.values.size()) + ", expected " +
                      std::to_string(dim));
    }
    if (!seen.insert(v.view_id).second) {
      throw Error(ErrorCode::kDuplicateView,
                  "duplicate view " + std::to_string(v.view_id) +
                      " for polyp " + std::to_string(polyp_id));
    }
    for (double x : v.values) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNonFinite,
                    "non-finite value in polyp " + std::to_string(polyp_id) +
                        " view " + std::to_string(v.view_id));
      }
    }
  }
}

std::vector<Violation> ValidateStore(const CaseStore& store) {
  std::vector<Violation> out;
  if (store.hash_bits == 0 && !store.records.empty()) {
    out.push_back({std::nullopt, "hash length K is zero"});
  }
  std::unordered_set<uint64_t> ids;
  ids.reserve(store.records.size());
  for (const auto& r : store.records) {
    if (!ids.insert(r.record_id).second) {
      out.push_back({r.record_id, "duplicate record_id " +
                                      std::to_string(r.record_id)});
    }
    if (r.code.num_bits() != store.hash_bits) {
      out.push_back({r.record_id,
                     "code length " + std::to_string(r.code.num_bits()) +
                         " != store K " + std::to_string(store.hash_bits)});
    } else if (r.code.words().size() != WordsForBits(store.hash_bits)) {
      out.push_back({r.record_id, "code word count does not match K"});
    } else if (!r.code.words().empty() &&
               (r.code.words().back() & ~LastWordMask(store.hash_bits)) != 0) {
      out.push_back({r.record_id, "nonzero pad bits in code"});
    }
    if (r.label < kUnlabeled) {
      out.push_back({r.record_id, "label " + std::to_string(r.label) +
                                      " is below the unlabeled sentinel"});
    } else if (r.label >= 0 && !store.label_space.Contains(r.label)) {
      out.push_back({r.record_id,
                     "label " + std::to_string(r.label) +
                         " outside label space of " +
                         std::to_string(store.label_space.num_classes) +
                         " classes"});
    }
  }
  if (!store.label_space.class_names.empty() &&
      store.label_space.class_names.size() != store.label_space.num_classes) {
    out.push_back({std::nullopt, "class_names length does not match C"});
  }
  if (store.index_params.leaf_size == 0) {
    out.push_back({std::nullopt, "leaf_size must be positive"});
  }
  return out;
}

LabelSpace InferLabelSpace(std::span<const LesionRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot infer label space from zero records");
  }
  int32_t max_label = kUnlabeled;
  for (const auto& r : records) {
    if (r.label < kUnlabeled) {
      throw Error(ErrorCode::kUnknownLabel,
                  "record " + std::to_string(r.record_id) + " has label " +
                      std::to_string(r.label));
    }
    max_label = std::max(max_label, r.label);
  }
  if (max_label == kUnlabeled) {
    throw Error(ErrorCode::kNoLabels, "no labels present");
  }
  return LabelSpace{static_cast<uint32_t>(max_label) + 1, {}};
}

CaseStore MakeCaseStore(uint32_t dimension, std::vector<LesionRecord> records,
                        IndexParams params) {
  CaseStore store;
  store.dimension = dimension;
  store.hash_bits = records.empty() ? dimension : records.front().code.num_bits();
  store.index_params = params;
  const bool any_labeled = std::any_of(
      records.begin(), records.end(),
      [](const LesionRecord& r) { return r.label != kUnlabeled; });
  if (any_labeled) store.label_space = InferLabelSpace(records);
  store.records = std::move(records);
  auto report = ValidateStore(store);
  if (!report.empty()) {
    throw Error(ErrorCode::kInvalidStore, report.front().message);
  }
  return store;
}

}  // namespace lesion
