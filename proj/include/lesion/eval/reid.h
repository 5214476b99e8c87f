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

#ifndef LESION_EVAL_REID_H_
#define LESION_EVAL_REID_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lesion/core_model.h"
#include "lesion/eval/metrics.h"
#include "lesion/fusion.h"

namespace lesion::eval {

// Re-identification: each query polyp must find its own fused reference.
struct ReidTask {
  std::vector<SceneEmbedding> queries;
  std::vector<SceneEmbedding> references;
  GroundTruth ground_truth;
};

// Which views form the query side and which the reference side.
struct ViewSplit {
  std::string name;
  ViewFilter query_views;
  ViewFilter reference_views;
};

// View roles used by the view-count ablation: Q1, Q2 query; R1, R2 reference.
inline constexpr uint32_t kQ1 = 0;
inline constexpr uint32_t kQ2 = 1;
inline constexpr uint32_t kR1 = 2;
inline constexpr uint32_t kR2 = 3;

// The nine query/reference view combinations of the view-count ablation,
// ordered single-to-single, single-to-multi, multi-to-single,
// multi-to-multi.
std::vector<ViewSplit> ViewAblationSplits();

enum class ScoreSpace { kCosine, kHamming };

const char* ScoreSpaceName(ScoreSpace space);

// Fuses each polyp's selected views on both sides; ground truth pairs a
// polyp with itself.
ReidTask BuildReidTask(std::span<const MultiViewScene> scenes, const ViewSplit& split,
                       const FusionConfig& cfg = {});

// Cosine on (re)normalized floats, or 1 - 2h/K on sign-quantized codes.
ScoreTable ScoreReidTask(const ReidTask& task, ScoreSpace space);

struct MetricsReport {
  std::string name;
  std::string score_space;
  double uap = 0.0;
  double acc_at_1 = 0.0;
  double recall_at_p90 = 0.0;
  size_t num_queries = 0;
  size_t num_references = 0;
  std::optional<double> queries_per_second;
};

// macro_ap swaps the pooled (micro) AP for the per-query mean.
MetricsReport EvaluateReid(const ReidTask& task, ScoreSpace space, bool macro_ap = false);

// One report per split.
std::vector<MetricsReport> ReidBenchmark(std::span<const MultiViewScene> scenes,
                                         std::span<const ViewSplit> splits,
                                         ScoreSpace space, const FusionConfig& cfg = {},
                                         bool macro_ap = false);

}  // namespace lesion::eval

#endif  // LESION_EVAL_REID_H_
