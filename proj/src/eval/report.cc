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

#include "lesion/eval/report.h"

#include <optional>

#include <fmt/core.h>

namespace lesion::eval {
namespace {

using nlohmann::json;

json Opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string Cell(const std::optional<double>& v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("-");
}

json Timing(const MethodTiming& t) {
  return {{"method", t.method}, {"median_qps", t.median_qps}, {"qps", t.qps}};
}

}  // namespace

json ToJson(const MetricsReport& r) {
  return {{"name", r.name},
          {"score_space", r.score_space},
          {"uap", r.uap},
          {"acc_at_1", r.acc_at_1},
          {"recall_at_p90", r.recall_at_p90},
          {"num_queries", r.num_queries},
          {"num_references", r.num_references},
          {"queries_per_second", Opt(r.queries_per_second)}};
}

json ToJson(const ClassificationReport& r) {
  json folds = json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"fold", f.fold},
                     {"num_test", f.num_test},
                     {"accuracy", f.accuracy},
                     {"auc", Opt(f.auc)},
                     {"f1", Opt(f.f1)}});
  }
  return {{"k", r.k},
          {"num_classes", r.num_classes},
          {"folds", std::move(folds)},
          {"mean", {{"accuracy", r.mean_accuracy}, {"auc", Opt(r.mean_auc)}, {"f1", Opt(r.mean_f1)}}},
          {"pooled",
           {{"accuracy", r.pooled_accuracy}, {"auc", Opt(r.pooled_auc)}, {"f1", Opt(r.pooled_f1)}}}};
}

json ToJson(const SpeedReport& r) {
  const auto& c = r.config;
  const double cos = r.cosine_linear.median_qps;
  return {{"config",
           {{"n", c.n},
            {"dim", c.dim},
            {"distribution", DistributionName(c.distribution)},
            {"repeats", c.repeats},
            {"num_queries", c.num_queries},
            {"k", c.k},
            {"leaf_size", c.leaf_size},
            {"seed", c.seed}}},
          {"workers", r.workers},
          {"methods", {Timing(r.cosine_linear), Timing(r.hamming_linear), Timing(r.hamming_ball_tree)}},
          {"speedup_vs_cosine",
           {{"hamming_linear_scan", cos > 0 ? r.hamming_linear.median_qps / cos : 0.0},
            {"hamming_ball_tree", cos > 0 ? r.hamming_ball_tree.median_qps / cos : 0.0}}},
          {"tree_build_seconds", r.tree_build_seconds},
          {"tree_nodes", r.tree_nodes},
          {"mean_nodes_visited", r.mean_nodes_visited}};
}

std::string FormatReidTable(std::span<const MetricsReport> reports) {
  std::string out = fmt::format("{:<12} {:<8} {:>7} {:>7} {:>9} {:>6} {:>6}\n", "split",
                                "space", "uAP", "Acc@1", "Rec@P90", "|Q|", "|R|");
  for (const auto& r : reports) {
    out += fmt::format("{:<12} {:<8} {:>7.4f} {:>7.4f} {:>9.4f} {:>6} {:>6}\n", r.name,
                       r.score_space, r.uap, r.acc_at_1, r.recall_at_p90, r.num_queries,
                       r.num_references);
  }
  return out;
}

std::string FormatClassificationTable(const ClassificationReport& r) {
  std::string out = fmt::format("kNN classification, k={}, classes={}\n", r.k, r.num_classes);
  out += fmt::format("{:<8} {:>6} {:>9} {:>8} {:>8}\n", "fold", "test", "accuracy", "auc", "f1");
  for (const auto& f : r.folds) {
    out += fmt::format("{:<8} {:>6} {:>9.4f} {:>8} {:>8}\n", f.fold, f.num_test, f.accuracy,
                       Cell(f.auc), Cell(f.f1));
  }
  out += fmt::format("{:<8} {:>6} {:>9.4f} {:>8} {:>8}\n", "mean", "", r.mean_accuracy,
                     Cell(r.mean_auc), Cell(r.mean_f1));
  out += fmt::format("{:<8} {:>6} {:>9.4f} {:>8} {:>8}\n", "pooled", "", r.pooled_accuracy,
                     Cell(r.pooled_auc), Cell(r.pooled_f1));
  return out;
}

std::string FormatSpeedTable(const SpeedReport& r) {
  const auto& c = r.config;
  std::string out = fmt::format("N={} D=K={} dist={} queries={} k={} repeats={} workers={}\n",
                                c.n, c.dim, DistributionName(c.distribution), c.num_queries,
                                c.k, c.repeats, r.workers);
  out += fmt::format("{:<22} {:>14} {:>10}\n", "method", "median q/s", "speedup");
  const double cos = r.cosine_linear.median_qps;
  for (const MethodTiming* t : {&r.cosine_linear, &r.hamming_linear, &r.hamming_ball_tree}) {
    out += fmt::format("{:<22} {:>14.1f} {:>9.2f}x\n", t->method, t->median_qps,
                       cos > 0 ? t->median_qps / cos : 0.0);
  }
  out += fmt::format("tree: {} nodes, built in {:.3f} s, {:.1f} nodes visited per query\n",
                     r.tree_nodes, r.tree_build_seconds, r.mean_nodes_visited);
  return out;
}

}  // namespace lesion::eval
