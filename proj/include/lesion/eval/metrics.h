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

#ifndef LESION_EVAL_METRICS_H_
#define LESION_EVAL_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lesion::eval {

// Similarity scores for every (query, reference) pair; higher is closer.
struct ScoreTable {
  std::vector<uint64_t> query_ids;
  std::vector<uint64_t> reference_ids;
  std::vector<double> scores;  // row-major, query_ids.size() x reference_ids.size()

  double at(size_t q, size_t r) const { return scores[q * reference_ids.size() + r]; }
};

// query_id -> the single reference_id that is its true match.
using GroundTruth = std::map<uint64_t, uint64_t>;

struct ScoredPair {
  uint64_t query_id = 0;
  uint64_t reference_id = 0;
  double score = 0.0;
  bool positive = false;
};

// All pairs sorted by score descending, ties by (query_id, reference_id)
// ascending. Throws kMissingGroundTruth when a query has no ground truth or its
// true reference is absent, kInvalidArgument for a malformed table.
std::vector<ScoredPair> PooledRanking(const ScoreTable& table, const GroundTruth& truth);

// Average precision over the pooled cross-query ranking:
// sum over true matches of precision at their rank, divided by |Q|.
double MicroAveragePrecision(const ScoreTable& table, const GroundTruth& truth);

// Mean over queries of per-query AP (1 / rank of the true match).
double MacroAveragePrecision(const ScoreTable& table, const GroundTruth& truth);

// Fraction of queries whose best reference (ties: lowest reference_id) is the
// true match.
double AccuracyAt1(const ScoreTable& table, const GroundTruth& truth);

// Largest recall over pooled-ranking prefixes with precision >= min_precision;
// 0 when no prefix qualifies.
double RecallAtPrecision(const ScoreTable& table, const GroundTruth& truth,
                         double min_precision = 0.9);

// Mann-Whitney AUC: P(s_pos > s_neg) + 0.5 P(s_pos == s_neg). Labels are 0/1.
// Throws kSingleClass when only one class is present.
double RocAuc(std::span<const double> scores, std::span<const int> labels);

struct F1Accuracy {
  double f1 = 0.0;
  double accuracy = 0.0;
};

// Class 1 is positive. F1 is 1 when there are no positives in either
// predictions or labels.
F1Accuracy F1AndAccuracy(std::span<const int> predictions, std::span<const int> labels);

struct Fold {
  std::vector<uint64_t> train_ids;
  std::vector<uint64_t> test_ids;
};

// Shuffles ids with a seeded generator and deals them round robin; test set
// sizes differ by at most one. Both lists in each fold are sorted. Throws
// kInvalidArgument when folds < 2, folds > ids.size() or ids repeat.
std::vector<Fold> KFoldSplit(std::span<const uint64_t> ids, size_t folds, uint64_t seed);

}  // namespace lesion::eval

#endif  // LESION_EVAL_METRICS_H_
