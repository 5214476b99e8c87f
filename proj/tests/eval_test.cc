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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "lesion/error.h"
#include "lesion/eval/classification.h"
#include "lesion/eval/reid.h"
#include "lesion/eval/report.h"
#include "lesion/eval/speed.h"
#include "lesion/eval/synthetic.h"
#include "lesion/io/embedding_file.h"
#include "lesion/service/pipeline.h"

namespace lesion::eval {
namespace {

SyntheticConfig SmallConfig(uint64_t seed) {
  SyntheticConfig cfg;
  cfg.num_polyps = 80;
  cfg.dim = 128;
  cfg.seed = seed;
  return cfg;
}

TEST(Synthetic, ShapeAndDeterminism) {
  auto cfg = SmallConfig(3);
  cfg.first_polyp_id = 1000;
  const auto a = GenerateScenes(cfg);
  const auto b = GenerateScenes(cfg);
  ASSERT_EQ(a.size(), 80u);
  std::set<int32_t> labels;
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].polyp_id, 1000 + i);
    ASSERT_EQ(a[i].views.size(), 4u);
    EXPECT_NO_THROW(a[i].Validate());
    EXPECT_EQ(a[i].dimension(), 128u);
    EXPECT_EQ(a[i].views[0].values, b[i].views[0].values);
    labels.insert(a[i].label);
  }
  EXPECT_EQ(labels, (std::set<int32_t>{0, 1}));
  cfg.seed = 4;
  EXPECT_NE(GenerateScenes(cfg)[0].views[0].values, a[0].views[0].values);
  EXPECT_EQ(FlattenViews(a).size(), 320u);
}

TEST(Reid, SelfMatchingIsPerfect) {
  const auto scenes = GenerateScenes(SmallConfig(1));
  const ViewSplit split{"self", {kQ1, kQ2}, {kQ1, kQ2}};
  const auto task = BuildReidTask(scenes, split);
  for (auto space : {ScoreSpace::kCosine, ScoreSpace::kHamming}) {
    const auto r = EvaluateReid(task, space);
    EXPECT_DOUBLE_EQ(r.uap, 1.0);
    EXPECT_DOUBLE_EQ(r.acc_at_1, 1.0);
    EXPECT_DOUBLE_EQ(r.recall_at_p90, 1.0);
    EXPECT_EQ(r.num_queries, 80u);
  }
}

TEST(Reid, HammingScoresAreCodeCosines) {
  const auto scenes = GenerateScenes(SmallConfig(2));
  const auto task = BuildReidTask(scenes, ViewAblationSplits().front());
  const auto t = ScoreReidTask(task, ScoreSpace::kHamming);
  for (double s : t.scores) {
    // 1 - 2h/K with K = 128.
    const double h = (1.0 - s) * 64.0;
    EXPECT_NEAR(h, std::round(h), 1e-9);
  }
}

TEST(Reid, AblationSplits) {
  const auto splits = ViewAblationSplits();
  ASSERT_EQ(splits.size(), 9u);
  std::set<std::string> names;
  for (const auto& s : splits) {
    names.insert(s.name);
    for (uint32_t v : s.query_views) EXPECT_TRUE(v == kQ1 || v == kQ2);
    for (uint32_t v : s.reference_views) EXPECT_TRUE(v == kR1 || v == kR2);
  }
  EXPECT_EQ(names.size(), 9u);
  EXPECT_EQ(splits.back().query_views.size(), 2u);
  EXPECT_EQ(splits.back().reference_views.size(), 2u);
}

TEST(Reid, MissingViewsAreReported) {
  auto scenes = GenerateScenes(SmallConfig(5));
  scenes[3].views.resize(1);  // only Q1 left
  EXPECT_THROW(BuildReidTask(scenes, ViewAblationSplits().front()), Error);
}

CaseDatabase SyntheticDb(size_t polyps, double separation) {
  auto cfg = SmallConfig(7);
  cfg.num_polyps = polyps;
  cfg.class_separation = separation;
  io::EmbeddingFile file;
  file.dimension = cfg.dim;
  uint64_t rid = 0;
  for (const auto& s : GenerateScenes(cfg)) {
    for (const auto& v : s.views) file.rows.push_back({rid++, s.label, v});
  }
  return CaseDatabase(service::BuildStore(file, {}).store);
}

TEST(Classification, FiveFoldsCoverEveryLabeledPolyp) {
  const auto db = SyntheticDb(80, 0.9);
  ClassificationConfig cfg;
  const auto r = EvaluateKnnClassification(db, cfg);
  ASSERT_EQ(r.folds.size(), 5u);
  size_t tested = 0;
  for (const auto& f : r.folds) {
    tested += f.num_test;
    EXPECT_GE(f.accuracy, 0.0);
    EXPECT_LE(f.accuracy, 1.0);
  }
  EXPECT_EQ(tested, 80u);
  EXPECT_EQ(r.num_classes, 2u);
  EXPECT_GT(r.pooled_accuracy, 0.8);
  ASSERT_TRUE(r.pooled_auc.has_value());
  ASSERT_TRUE(r.pooled_f1.has_value());
  // Deterministic in the seed.
  EXPECT_EQ(EvaluateKnnClassification(db, cfg).pooled_accuracy, r.pooled_accuracy);
}

TEST(Classification, TooManyFolds) {
  const auto db = SyntheticDb(80, 0.5);
  ClassificationConfig cfg;
  cfg.folds = 81;
  try {
    EvaluateKnnClassification(db, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Speed, TreeAgreesWithLinearScan) {
  SpeedBenchmarkConfig cfg;
  cfg.n = 600;
  cfg.dim = 64;
  cfg.repeats = 3;
  cfg.num_queries = 20;
  const auto r = RunSpeedBenchmark(cfg);
  EXPECT_EQ(r.tree_results, r.hamming_results);
  EXPECT_EQ(r.cosine_linear.qps.size(), 3u);
  EXPECT_GT(r.hamming_linear.median_qps, 0.0);
  const auto j = ToJson(r);
  EXPECT_TRUE(j.contains("speedup_vs_cosine"));
  EXPECT_FALSE(FormatSpeedTable(r).empty());
  cfg.repeats = 2;
  EXPECT_THROW(RunSpeedBenchmark(cfg), Error);
}

TEST(Report, ReidJsonFields) {
  MetricsReport m;
  m.name = "x";
  m.score_space = "cosine";
  m.uap = 0.5;
  const auto j = ToJson(m);
  EXPECT_EQ(j["uap"], 0.5);
  EXPECT_EQ(j["name"], "x");
  std::vector<MetricsReport> v{m};
  EXPECT_NE(FormatReidTable(v).find("x"), std::string::npos);
}

}  // namespace
}  // namespace lesion::eval
