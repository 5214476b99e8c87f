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

#include "lesion/fusion.h"

#include <cmath>
#include <string>
#include <unordered_map>

#include "lesion/error.h"

namespace lesion {

double L2Norm(std::span<const double> v) {
  // Scaled accumulation avoids overflow for large-magnitude inputs.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double sum = 0.0;
  for (double x : v) {
    const double y = x / scale;
    sum += y * y;
  }
  return scale * std::sqrt(sum);
}

Vector L2Normalize(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kNonFinite, "non-finite vector component");
    }
  }
  const double norm = L2Norm(v);
  if (norm == 0.0) throw Error(ErrorCode::kZeroNorm, "zero-norm vector");
  Vector out(v.begin(), v.end());
  for (double& x : out) x /= norm;
  return out;
}

SceneEmbedding FuseAverage(const MultiViewScene& scene, const FusionConfig& cfg) {
  scene.Validate();
  const size_t dim = scene.dimension();
  Vector sum(dim, 0.0);
  for (const auto& view : scene.views) {
    if (cfg.normalize_inputs) {
      const Vector unit = L2Normalize(view.values);
      for (size_t d = 0; d < dim; ++d) sum[d] += unit[d];
    } else {
      for (size_t d = 0; d < dim; ++d) sum[d] += view.values[d];
    }
  }
  const double n = static_cast<double>(scene.views.size());
  for (double& x : sum) x /= n;

  SceneEmbedding out{scene.polyp_id, std::move(sum)};
  if (cfg.normalize_output) {
    if (L2Norm(out.values) == 0.0) {
      throw Error(ErrorCode::kDegenerateFusion,
                  "degenerate fusion: views of polyp " +
                      std::to_string(scene.polyp_id) + " sum to zero");
    }
    out.values = L2Normalize(out.values);
  }
  return out;
}

std::vector<SceneEmbedding> FuseStore(std::span<const MultiViewScene> scenes,
                                      const FusionConfig& cfg,
                                      const std::optional<ViewFilter>& view_filter) {
  std::vector<SceneEmbedding> out;
  out.reserve(scenes.size());
  for (const auto& scene : scenes) {
    if (!view_filter) {
      out.push_back(FuseAverage(scene, cfg));
      continue;
    }
    MultiViewScene kept{scene.polyp_id, {}, scene.label};
    for (const auto& v : scene.views) {
      if (view_filter->contains(v.view_id)) kept.views.push_back(v);
    }
    if (kept.views.empty()) {
      throw Error(ErrorCode::kEmptyScene,
                  "view filter leaves polyp " + std::to_string(scene.polyp_id) +
                      " without views");
    }
    out.push_back(FuseAverage(kept, cfg));
  }
  return out;
}

std::vector<MultiViewScene> GroupByPolyp(std::span<const ViewEmbedding> views) {
  std::vector<MultiViewScene> scenes;
  std::unordered_map<uint64_t, size_t> slot;
  for (const auto& v : views) {
    auto [it, inserted] = slot.try_emplace(v.polyp_id, scenes.size());
    if (inserted) scenes.push_back(MultiViewScene{v.polyp_id, {}, kUnlabeled});
    scenes[it->second].views.push_back(v);
  }
  return scenes;
}

}  // namespace lesion
