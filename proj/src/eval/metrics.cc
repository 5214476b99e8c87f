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
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "lesion/error.h"

namespace lesion::eval {
namespace {

void CheckTable(const ScoreTable& table, const GroundTruth& truth) {
  if (table.scores.size() != table.query_ids.size() * table.reference_ids.size()) {
    throw Error(ErrorCode::kInvalidArgument, "score table has wrong size");
  }
  if (table.query_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "score table has no queries");
  }
  std::set<uint64_t> refs(table.reference_ids.begin(), table.reference_ids.end());
  for (uint64_t q : table.query_ids) {
    auto it = truth.find(q);
    if (it == truth.end()) {
      throw Error(ErrorCode::kMissingGroundTruth,
                  "query " + std::to_string(q) + " has no ground truth");
    }
    if (!refs.contains(it->second)) {
      throw Error(ErrorCode::kMissingGroundTruth,
                  "true reference " + std::to_string(it->second) + " of query " +
                      std::to_string(q) + " is not among the references");
    }
  }
}

// Rank (1-based) of the true match within one query's row.
size_t RankOfTruth(const ScoreTable& table, size_t q, uint64_t truth_ref) {
  size_t truth_col = 0;
  for (size_t r = 0; r < table.reference_ids.size(); ++r) {
    if (table.reference_ids[r] == truth_ref) truth_col = r;
  }
  const double s = table.at(q, truth_col);
  size_t rank = 1;
  for (size_t r = 0; r < table.reference_ids.size(); ++r) {
    if (r == truth_col) continue;
    const double o = table.at(q, r);
    if (o > s || (o == s && table.reference_ids[r] < truth_ref)) ++rank;
  }
  return rank;
}

}  // namespace

std::vector<ScoredPair> PooledRanking(const ScoreTable& table, const GroundTruth& truth) {
  CheckTable(table, truth);
  std::vector<ScoredPair> pooled;
  pooled.reserve(table.scores.size());
  for (size_t q = 0; q < table.query_ids.size(); ++q) {
    const uint64_t qid = table.query_ids[q];
    const uint64_t match = truth.at(qid);
    for (size_t r = 0; r < table.reference_ids.size(); ++r) {
      const uint64_t rid = table.reference_ids[r];
      pooled.push_back({qid, rid, table.at(q, r), rid == match});
    }
  }
  std::sort(pooled.begin(), pooled.end(), [](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.query_id != b.query_id) return a.query_id < b.query_id;
    return a.reference_id < b.reference_id;
  });
  return pooled;
}

double MicroAveragePrecision(const ScoreTable& table, const GroundTruth& truth) {
  const auto pooled = PooledRanking(table, truth);
  double sum = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < pooled.size(); ++i) {
    if (!pooled[i].positive) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(table.query_ids.size());
}

double MacroAveragePrecision(const ScoreTable& table, const GroundTruth& truth) {
  CheckTable(table, truth);
  double sum = 0.0;
  for (size_t q = 0; q < table.query_ids.size(); ++q) {
    sum += 1.0 / static_cast<double>(RankOfTruth(table, q, truth.at(table.query_ids[q])));
  }
  return sum / static_cast<double>(table.query_ids.size());
}

double AccuracyAt1(const ScoreTable& table, const GroundTruth& truth) {
  CheckTable(table, truth);
  size_t correct = 0;
  for (size_t q = 0; q < table.query_ids.size(); ++q) {
    correct += RankOfTruth(table, q, truth.at(table.query_ids[q])) == 1 ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(table.query_ids.size());
}

double RecallAtPrecision(const ScoreTable& table, const GroundTruth& truth,
                         double min_precision) {
  const auto pooled = PooledRanking(table, truth);
  const double total = static_cast<double>(table.query_ids.size());
  double best = 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < pooled.size(); ++i) {
    if (pooled[i].positive) ++hits;
    const double precision = static_cast<double>(hits) / static_cast<double>(i + 1);
    if (precision >= min_precision) best = std::max(best, static_cast<double>(hits) / total);
  }
  return best;
}

double RocAuc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scores and labels differ in length");
  }
  size_t n_pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) {
      throw Error(ErrorCode::kInvalidArgument, "AUC labels must be 0 or 1");
    }
    n_pos += static_cast<size_t>(l);
  }
  const size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorCode::kSingleClass, "AUC needs both classes present");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Midranks over tie groups.
  double pos_rank_sum = 0.0;
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

F1Accuracy F1AndAccuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size() || labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions and labels must be non-empty and equally long");
  }
  size_t tp = 0, fp = 0, fn = 0, correct = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] == 1;
    const bool l = labels[i] == 1;
    tp += (p && l) ? 1 : 0;
    fp += (p && !l) ? 1 : 0;
    fn += (!p && l) ? 1 : 0;
    correct += predictions[i] == labels[i] ? 1 : 0;
  }
  F1Accuracy out;
  const size_t denom = 2 * tp + fp + fn;
  out.f1 = denom == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  out.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  return out;
}

std::vector<Fold> KFoldSplit(std::span<const uint64_t> ids, size_t folds, uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 folds");
  if (folds > ids.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::to_string(folds) + " folds requested for " +
                    std::to_string(ids.size()) + " ids");
  }
  std::vector<uint64_t> shuffled(ids.begin(), ids.end());
  std::sort(shuffled.begin(), shuffled.end());
  if (std::adjacent_find(shuffled.begin(), shuffled.end()) != shuffled.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate ids in k-fold split");
  }
  // Fisher-Yates with raw engine output keeps the split identical across
  // standard library implementations.
  std::mt19937_64 rng(seed);
  for (size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng() % i]);
  }
  std::vector<Fold> out(folds);
  for (size_t i = 0; i < shuffled.size(); ++i) {
    for (size_t f = 0; f < folds; ++f) {
      (f == i % folds ? out[f].test_ids : out[f].train_ids).push_back(shuffled[i]);
    }
  }
  for (auto& f : out) {
    std::sort(f.train_ids.begin(), f.train_ids.end());
    std::sort(f.test_ids.begin(), f.test_ids.end());
  }
  return out;
}

}  // namespace lesion::eval
