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

#include "lesion/eval/synthetic.h"

#include <cmath>
#include <random>

#include "lesion/error.h"
#include "lesion/fusion.h"

namespace lesion::eval {
namespace {

Vector Gaussian(std::mt19937_64& rng, uint32_t dim, double stddev) {
  std::normal_distribution<double> normal(0.0, stddev);
  Vector v(dim);
  for (double& x : v) x = normal(rng);
  return v;
}

}  // namespace

std::vector<MultiViewScene> GenerateScenes(const SyntheticConfig& cfg) {
  if (cfg.dim == 0 || cfg.views_per_polyp == 0 || cfg.num_classes == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic config has a zero size");
  }
  std::mt19937_64 rng(cfg.seed);
  const double unit_scale = 1.0 / std::sqrt(static_cast<double>(cfg.dim));

  std::vector<Vector> class_dirs;
  for (uint32_t c = 0; c < cfg.num_classes; ++c) {
    class_dirs.push_back(L2Normalize(Gaussian(rng, cfg.dim, 1.0)));
  }

  std::vector<MultiViewScene> scenes;
  scenes.reserve(cfg.num_polyps);
  for (size_t p = 0; p < cfg.num_polyps; ++p) {
    const auto label = static_cast<int32_t>(rng() % cfg.num_classes);
    Vector center = Gaussian(rng, cfg.dim, unit_scale);
    for (uint32_t d = 0; d < cfg.dim; ++d) {
      center[d] += cfg.class_separation * class_dirs[label][d];
    }
    center = L2Normalize(center);

    MultiViewScene scene;
    scene.polyp_id = cfg.first_polyp_id + p;
    scene.label = label;
    for (uint32_t v = 0; v < cfg.views_per_polyp; ++v) {
      Vector view = Gaussian(rng, cfg.dim, cfg.view_noise * unit_scale);
      for (uint32_t d = 0; d < cfg.dim; ++d) view[d] += center[d];
      scene.views.push_back(ViewEmbedding{scene.polyp_id, v, std::move(view)});
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<ViewEmbedding> FlattenViews(const std::vector<MultiViewScene>& scenes) {
  std::vector<ViewEmbedding> out;
  for (const auto& s : scenes) out.insert(out.end(), s.views.begin(), s.views.end());
  return out;
}

}  // namespace lesion::eval
