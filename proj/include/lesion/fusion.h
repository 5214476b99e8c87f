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

#ifndef LESION_FUSION_H_
#define LESION_FUSION_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "lesion/core_model.h"

namespace lesion {

struct FusionConfig {
  bool normalize_inputs = true;
  bool normalize_output = true;
};

double L2Norm(std::span<const double> v);

// Throws kZeroNorm for a zero vector and kNonFinite for NaN/Inf input.
Vector L2Normalize(std::span<const double> v);

// Mean of the (optionally normalized) views, optionally renormalized.
// Throws kEmptyScene, kDegenerateFusion when normalize_output is set and the
// views cancel out, plus any MultiViewScene::Validate error.
SceneEmbedding FuseAverage(const MultiViewScene& scene,
                           const FusionConfig& cfg = {});

using ViewFilter = std::set<uint32_t>;

// Fuses every scene, keeping only views whose view_id is in the filter when
// one is given. Output order follows input order. Throws kEmptyScene naming
// the polyp when the filter removes all of a scene's views.
std::vector<SceneEmbedding> FuseStore(
    std::span<const MultiViewScene> scenes, const FusionConfig& cfg = {},
    const std::optional<ViewFilter>& view_filter = std::nullopt);

// Groups flat view rows into scenes ordered by first appearance of polyp_id.
std::vector<MultiViewScene> GroupByPolyp(std::span<const ViewEmbedding> views);

}  // namespace lesion

#endif  // LESION_FUSION_H_
