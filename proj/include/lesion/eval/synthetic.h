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

#ifndef LESION_EVAL_SYNTHETIC_H_
#define LESION_EVAL_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "lesion/core_model.h"

namespace lesion::eval {

// Clustered multi-view data: each polyp has a latent unit direction pulled
// toward its class direction, and each view adds independent isotropic noise
// of the given relative magnitude to it.
struct SyntheticConfig {
  size_t num_polyps = 500;
  uint32_t views_per_polyp = 4;
  uint32_t dim = 1024;
  uint32_t num_classes = 2;
  double class_separation = 0.5;
  double view_noise = 2.25;
  uint64_t first_polyp_id = 0;
  uint64_t seed = 0;
};

// Polyp ids are consecutive from first_polyp_id; view ids are 0..views-1.
std::vector<MultiViewScene> GenerateScenes(const SyntheticConfig& cfg);

// Flattens scenes into view rows (polyp order, then view order).
std::vector<ViewEmbedding> FlattenViews(const std::vector<MultiViewScene>& scenes);

}  // namespace lesion::eval

#endif  // LESION_EVAL_SYNTHETIC_H_
