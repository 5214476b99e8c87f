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

#include "lesion/eval/metrics.h"

#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "lesion/error.h"
#include "testing/oracles.h"

namespace lesion::eval {
namespace {

ScoreTable Table(std::vector<uint64_t> q, std::vector<uint64_t> r, std::vector<double> s) {
  return ScoreTable{std::move(q), std::move(r), std::move(s)};
}

TEST(Metrics, PerfectRetrievalScoresOne) {
  // Diagonal ranks first everywhere, including in the pooled ranking.
  const auto t = Table({1, 2, 3}, {1, 2, 3}, {0.9, 0.1, 0.2, 0.0, 0.95, 0.1, 0.3, 0.2, 0.8});
  const GroundTruth gt{{1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(MicroAveragePrecision(t, gt), 1.0);
  EXPECT_EQ(MacroAveragePrecision(t, gt), 1.0);
  EXPECT_EQ(AccuracyAt1(t, gt), 1.0);
  EXPECT_EQ(RecallAtPrecision(t, gt, 0.9), 1.0);
}

TEST(Metrics, TrueMatchRankedSecond) {
  const auto t = Table({7}, {1, 2}, {0.9, 0.4});
  const GroundTruth gt{{7, 2}};
  EXPECT_DOUBLE_EQ(MicroAveragePrecision(t, gt), 0.5);
  EXPECT_DOUBLE_EQ(MacroAveragePrecision(t, gt), 0.5);
  EXPECT_EQ(AccuracyAt1(t, gt), 0.0);
  EXPECT_EQ(RecallAtPrecision(t, gt, 0.9), 0.0);
  EXPECT_EQ(RecallAtPrecision(t, gt, 0.5), 1.0);
}

TEST(Metrics, TiesBreakByIds) {
  // Equal scores: reference 1 ranks before reference 2.
  const auto t = Table({7}, {2, 1}, {0.5, 0.5});
  EXPECT_EQ(AccuracyAt1(t, {{7, 1}}), 1.0);
  EXPECT_EQ(AccuracyAt1(t, {{7, 2}}), 0.0);
  const auto pooled = PooledRanking(t, {{7, 1}});
  ASSERT_EQ(pooled.size(), 2u);
  EXPECT_EQ(pooled[0].reference_id, 1u);
  EXPECT_TRUE(pooled[0].positive);
}

TEST(Metrics, MissingGroundTruthIsAnError) {
  const auto t = Table({7, 8}, {1}, {0.5, 0.5});
  try {
    MicroAveragePrecision(t, {{7, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingGroundTruth);
  }
  EXPECT_THROW(MicroAveragePrecision(t, {{7, 1}, {8, 9}}), Error);
  EXPECT_THROW(MicroAveragePrecision(Table({1}, {1}, {}), {{1, 1}}), Error);
}

TEST(Metrics, RandomTasksMatchOracles) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const bool ties = i % 2 == 0;
    const auto task = testing::MakeRandomTask(rng, 20, 40, ties);
    const auto& t = task.table;
    const auto& gt = task.truth;
    EXPECT_NEAR(MicroAveragePrecision(t, gt), testing::NaiveMicroAp(t, gt), 1e-9);
    EXPECT_NEAR(MacroAveragePrecision(t, gt), testing::NaiveMacroAp(t, gt), 1e-9);
    EXPECT_NEAR(AccuracyAt1(t, gt), testing::NaiveAccAt1(t, gt), 1e-9);
    for (double p : {0.5, 0.9, 1.0}) {
      EXPECT_NEAR(RecallAtPrecision(t, gt, p), testing::NaiveRecallAtPrecision(t, gt, p),
                  1e-9);
    }
  }
}

TEST(Metrics, BoundsAndMonotonicity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto task = testing::MakeRandomTask(rng, 10, 20, true);
    const double uap = MicroAveragePrecision(task.table, task.truth);
    EXPECT_GE(uap, 0.0);
    EXPECT_LE(uap, 1.0);
    EXPECT_GE(RecallAtPrecision(task.table, task.truth, 0.5),
              RecallAtPrecision(task.table, task.truth, 0.9));
  }
}

TEST(RocAuc, ExamplesAndOracle) {
  std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  std::vector<int> y = {0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(RocAuc(s, y), 0.75);
  s = {0.5, 0.5};
  y = {0, 1};
  EXPECT_DOUBLE_EQ(RocAuc(s, y), 0.5);
  y = {1, 1};
  try {
    RocAuc(s, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const size_t n = 2 + rng() % 30;
    std::vector<double> sc(n);
    std::vector<int> lb(n);
    for (size_t j = 0; j < n; ++j) {
      sc[j] = static_cast<double>(rng() % 5) / 4.0;
      lb[j] = static_cast<int>(rng() % 2);
    }
    lb[0] = 0;
    lb[1] = 1;
    EXPECT_NEAR(RocAuc(sc, lb), testing::NaiveAuc(sc, lb), 1e-12);
  }
}

TEST(F1AndAccuracy, ExamplesAndOracle) {
  std::vector<int> pred = {1, 1, 0, 0}, y = {1, 0, 1, 0};
  auto r = F1AndAccuracy(pred, y);
  EXPECT_DOUBLE_EQ(r.f1, 0.5);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.5);
  pred = {0, 0};
  y = {0, 0};
  r = F1AndAccuracy(pred, y);
  EXPECT_EQ(r.f1, 1.0);
  EXPECT_EQ(r.accuracy, 1.0);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const size_t n = 1 + rng() % 30;
    std::vector<int> p(n), l(n);
    for (size_t j = 0; j < n; ++j) {
      p[j] = static_cast<int>(rng() % 2);
      l[j] = static_cast<int>(rng() % 2);
    }
    EXPECT_NEAR(F1AndAccuracy(p, l).f1, testing::NaiveF1(p, l), 1e-12);
  }
}

TEST(KFoldSplit, PartitionsIds) {
  std::vector<uint64_t> ids;
  for (uint64_t i = 0; i < 23; ++i) ids.push_back(i * 7 + 3);
  const auto folds = KFoldSplit(ids, 5, 42);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<uint64_t> seen;
  for (const auto& f : folds) {
    EXPECT_TRUE(f.test_ids.size() == 4 || f.test_ids.size() == 5);
    EXPECT_EQ(f.test_ids.size() + f.train_ids.size(), ids.size());
    EXPECT_TRUE(std::is_sorted(f.test_ids.begin(), f.test_ids.end()));
    EXPECT_TRUE(std::is_sorted(f.train_ids.begin(), f.train_ids.end()));
    for (uint64_t id : f.test_ids) {
      seen.insert(id);
      EXPECT_FALSE(std::binary_search(f.train_ids.begin(), f.train_ids.end(), id));
    }
  }
  EXPECT_EQ(seen, std::multiset<uint64_t>(ids.begin(), ids.end()));
  // Deterministic in the seed.
  const auto again = KFoldSplit(ids, 5, 42);
  for (size_t i = 0; i < 5; ++i) EXPECT_EQ(again[i].test_ids, folds[i].test_ids);
}

TEST(KFoldSplit, RejectsBadArguments) {
  const std::vector<uint64_t> ids = {1, 2, 3};
  EXPECT_THROW(KFoldSplit(ids, 1, 0), Error);
  EXPECT_THROW(KFoldSplit(ids, 4, 0), Error);
  const std::vector<uint64_t> dup = {1, 1, 2};
  EXPECT_THROW(KFoldSplit(dup, 2, 0), Error);
}

}  // namespace
}  // namespace lesion::eval
