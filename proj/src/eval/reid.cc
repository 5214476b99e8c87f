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

#include "lesion/eval/reid.h"

#include <chrono>

#include "lesion/hashing.h"

namespace lesion::eval {

std::vector<ViewSplit> ViewAblationSplits() {
  return {
      {"Q1|R1", {kQ1}, {kR1}},
      {"Q1|R2", {kQ1}, {kR2}},
      {"Q2|R1", {kQ2}, {kR1}},
      {"Q2|R2", {kQ2}, {kR2}},
      {"Q1|R1R2", {kQ1}, {kR1, kR2}},
      {"Q2|R1R2", {kQ2}, {kR1, kR2}},
      {"Q1Q2|R1", {kQ1, kQ2}, {kR1}},
      {"Q1Q2|R2", {kQ1, kQ2}, {kR2}},
      {"Q1Q2|R1R2", {kQ1, kQ2}, {kR1, kR2}},
  };
}

const char* ScoreSpaceName(ScoreSpace space) {
  return space == ScoreSpace::kCosine ? "cosine" : "hamming";
}

ReidTask BuildReidTask(std::span<const MultiViewScene> scenes, const ViewSplit& split,
                       const FusionConfig& cfg) {
  ReidTask task;
  task.queries = FuseStore(scenes, cfg, split.query_views);
  task.references = FuseStore(scenes, cfg, split.reference_views);
  for (const auto& q : task.queries) task.ground_truth[q.polyp_id] = q.polyp_id;
  return task;
}

ScoreTable ScoreReidTask(const ReidTask& task, ScoreSpace space) {
  ScoreTable table;
  for (const auto& q : task.queries) table.query_ids.push_back(q.polyp_id);
  for (const auto& r : task.references) table.reference_ids.push_back(r.polyp_id);
  const size_t nq = task.queries.size();
  const size_t nr = task.references.size();
  table.scores.resize(nq * nr);

  if (space == ScoreSpace::kCosine) {
    std::vector<Vector> qs, rs;
    for (const auto& q : task.queries) qs.push_back(L2Normalize(q.values));
    for (const auto& r : task.references) rs.push_back(L2Normalize(r.values));
    for (size_t i = 0; i < nq; ++i) {
      for (size_t j = 0; j < nr; ++j) {
        double dot = 0.0;
        for (size_t d = 0; d < qs[i].size(); ++d) dot += qs[i][d] * rs[j][d];
        table.scores[i * nr + j] = dot;
      }
    }
    return table;
  }

  std::vector<HashCode> qc, rc;
  for (const auto& q : task.queries) qc.push_back(SignQuantize(q.values));
  for (const auto& r : task.references) rc.push_back(SignQuantize(r.values));
  const uint32_t bits = qc.empty() ? 0 : qc.front().num_bits();
  for (size_t i = 0; i < nq; ++i) {
    for (size_t j = 0; j < nr; ++j) {
      table.scores[i * nr + j] = HammingToCosine(HammingDistance(qc[i], rc[j]), bits);
    }
  }
  return table;
}

MetricsReport EvaluateReid(const ReidTask& task, ScoreSpace space, bool macro_ap) {
  const auto start = std::chrono::steady_clock::now();
  const ScoreTable table = ScoreReidTask(task, space);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  MetricsReport report;
  report.score_space = ScoreSpaceName(space);
  report.num_queries = task.queries.size();
  report.num_references = task.references.size();
  report.uap = macro_ap ? MacroAveragePrecision(table, task.ground_truth)
                        : MicroAveragePrecision(table, task.ground_truth);
  report.acc_at_1 = AccuracyAt1(table, task.ground_truth);
  report.recall_at_p90 = RecallAtPrecision(table, task.ground_truth, 0.9);
  if (secs > 0.0) report.queries_per_second = static_cast<double>(task.queries.size()) / secs;
  return report;
}

std::vector<MetricsReport> ReidBenchmark(std::span<const MultiViewScene> scenes,
                                         std::span<const ViewSplit> splits,
                                         ScoreSpace space, const FusionConfig& cfg,
                                         bool macro_ap) {
  std::vector<MetricsReport> out;
  for (const auto& split : splits) {
    MetricsReport r = EvaluateReid(BuildReidTask(scenes, split, cfg), space, macro_ap);
    r.name = split.name;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lesion::eval
