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

#include "testing/fixtures.h"

#include "json.hpp"

#include "lesion/eval/synthetic.h"

namespace lesion::testing {

io::EmbeddingFile SyntheticEmbeddingFile(size_t polyps, uint32_t views, uint32_t dim,
                                         uint64_t seed, uint64_t first_polyp_id,
                                         uint64_t first_record_id) {
  eval::SyntheticConfig cfg;
  cfg.num_polyps = polyps;
  cfg.views_per_polyp = views;
  cfg.dim = dim;
  cfg.seed = seed;
  cfg.first_polyp_id = first_polyp_id;
  io::EmbeddingFile file;
  file.dimension = dim;
  uint64_t rid = first_record_id;
  for (const auto& scene : eval::GenerateScenes(cfg)) {
    for (auto v : scene.views) {
      for (double& x : v.values) x = static_cast<float>(x);
      file.rows.push_back({rid++, scene.label, std::move(v)});
    }
  }
  return file;
}

std::string QueryBodyForPolyp(const io::EmbeddingFile& file, uint64_t polyp_id,
                              size_t k, const std::string& metric, bool exclude_self) {
  nlohmann::json body;
  body["polyp_id"] = polyp_id;
  body["k"] = k;
  body["metric"] = metric;
  body["exclude_self"] = exclude_self;
  body["views"] = nlohmann::json::array();
  for (const auto& row : file.rows) {
    if (row.view.polyp_id != polyp_id) continue;
    body["views"].push_back({{"view_id", row.view.view_id}, {"values", row.view.values}});
  }
  return body.dump();
}

io::EmbeddingFile RowsForPolyp(const io::EmbeddingFile& file, uint64_t polyp_id) {
  io::EmbeddingFile out;
  out.dimension = file.dimension;
  for (const auto& row : file.rows) {
    if (row.view.polyp_id == polyp_id) out.rows.push_back(row);
  }
  return out;
}

}  // namespace lesion::testing
