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

#include "lesion/eval/speed.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "lesion/ball_tree.h"
#include "lesion/error.h"
#include "lesion/hashing.h"

namespace lesion::eval {
namespace {

using Clock = std::chrono::steady_clock;

// Row-major float matrix of L2-normalized rows.
struct FloatMatrix {
  size_t rows = 0;
  size_t dim = 0;
  std::vector<float> data;
  const float* row(size_t i) const { return data.data() + i * dim; }
};

void NormalizeRow(float* v, size_t dim) {
  double s = 0.0;
  for (size_t d = 0; d < dim; ++d) s += static_cast<double>(v[d]) * v[d];
  const auto inv = static_cast<float>(1.0 / std::sqrt(s));
  for (size_t d = 0; d < dim; ++d) v[d] *= inv;
}

struct Dataset {
  FloatMatrix base;
  FloatMatrix queries;
};

Dataset MakeDataset(const SpeedBenchmarkConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::uniform_real_distribution<float> uniform(-1.0f, 1.0f);
  const size_t dim = cfg.dim;
  const size_t num_clusters = std::max<size_t>(1, cfg.n / 500);
  std::vector<float> centers(num_clusters * dim);
  for (float& x : centers) x = normal(rng);
  constexpr float kClusterNoise = 0.5f;

  auto fill = [&](FloatMatrix& m, size_t rows) {
    m.rows = rows;
    m.dim = dim;
    m.data.resize(rows * dim);
    for (size_t i = 0; i < rows; ++i) {
      float* v = m.data.data() + i * dim;
      if (cfg.distribution == DataDistribution::kUniform) {
        for (size_t d = 0; d < dim; ++d) v[d] = uniform(rng);
      } else {
        const float* c = centers.data() + (rng() % num_clusters) * dim;
        for (size_t d = 0; d < dim; ++d) v[d] = c[d] + kClusterNoise * normal(rng);
      }
      NormalizeRow(v, dim);
    }
  };
  Dataset ds;
  fill(ds.base, cfg.n);
  fill(ds.queries, cfg.num_queries);
  return ds;
}

inline float Dot(const float* a, const float* b, size_t n) {
  // Independent lanes let the compiler vectorize without reassociation flags.
  float acc[8] = {};
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (size_t l = 0; l < 8; ++l) acc[l] += a[i + l] * b[i + l];
  }
  float s = 0.0f;
  for (; i < n; ++i) s += a[i] * b[i];
  for (float x : acc) s += x;
  return s;
}

struct ScoredId {
  float score;
  uint64_t id;
  // Heap "less" puts the worst candidate (lowest score, highest id) on top.
  bool operator<(const ScoredId& o) const {
    if (score != o.score) return score > o.score;
    return id < o.id;
  }
};

std::vector<uint64_t> CosineTopK(const FloatMatrix& base, const float* q, size_t k) {
  std::vector<ScoredId> heap;
  heap.reserve(k + 1);
  for (size_t i = 0; i < base.rows; ++i) {
    const ScoredId cand{Dot(base.row(i), q, base.dim), i};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end());
    } else if (cand < heap.front()) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end());
    }
  }
  std::sort_heap(heap.begin(), heap.end());
  std::vector<uint64_t> ids;
  for (const auto& c : heap) ids.push_back(c.id);
  return ids;
}

HashCode QuantizeRow(const float* v, size_t dim) {
  HashCode code(static_cast<uint32_t>(dim));
  for (size_t d = 0; d < dim; ++d) {
    if (v[d] >= 0.0f) code.set_bit(static_cast<uint32_t>(d), true);
  }
  return code;
}

std::vector<uint64_t> Ids(const RankedNeighbors& r) {
  std::vector<uint64_t> ids;
  for (const auto& n : r.entries) ids.push_back(n.record_id);
  return ids;
}

template <typename Fn>
MethodTiming Time(const std::string& name, size_t repeats, size_t queries, Fn&& run) {
  MethodTiming t;
  t.method = name;
  for (size_t rep = 0; rep < repeats; ++rep) {
    const auto start = Clock::now();
    run();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    t.qps.push_back(static_cast<double>(queries) / std::max(secs, 1e-12));
  }
  std::vector<double> sorted = t.qps;
  std::sort(sorted.begin(), sorted.end());
  t.median_qps = sorted[sorted.size() / 2];
  return t;
}

}  // namespace

const char* DistributionName(DataDistribution d) {
  return d == DataDistribution::kClustered ? "clustered" : "uniform";
}

SpeedReport RunSpeedBenchmark(const SpeedBenchmarkConfig& cfg) {
  if (cfg.n == 0 || cfg.dim == 0 || cfg.k == 0 || cfg.num_queries == 0) {
    throw Error(ErrorCode::kInvalidArgument, "benchmark sizes must be positive");
  }
  if (cfg.repeats < 3) {
    throw Error(ErrorCode::kInvalidArgument, "benchmark needs at least 3 repeats");
  }
  const Dataset ds = MakeDataset(cfg);
  CodeMatrix codes(cfg.dim);
  codes.Reserve(cfg.n);
  std::vector<uint64_t> ids(cfg.n);
  for (size_t i = 0; i < cfg.n; ++i) {
    codes.Append(QuantizeRow(ds.base.row(i), cfg.dim));
    ids[i] = i;
  }
  std::vector<HashCode> query_codes;
  for (size_t q = 0; q < cfg.num_queries; ++q) {
    query_codes.push_back(QuantizeRow(ds.queries.row(q), cfg.dim));
  }

  SpeedReport report;
  report.config = cfg;
  const auto build_start = Clock::now();
  const BallTreeIndex tree = BallTreeIndex::Build(codes, ids, cfg.leaf_size, cfg.seed);
  report.tree_build_seconds =
      std::chrono::duration<double>(Clock::now() - build_start).count();
  report.tree_nodes = tree.nodes().size();

  const size_t nq = cfg.num_queries;
  report.cosine_results.resize(nq);
  report.hamming_results.resize(nq);
  report.tree_results.resize(nq);

  report.cosine_linear = Time("cosine_linear_scan", cfg.repeats, nq, [&] {
    for (size_t q = 0; q < nq; ++q) {
      report.cosine_results[q] = CosineTopK(ds.base, ds.queries.row(q), cfg.k);
    }
  });
  report.hamming_linear = Time("hamming_linear_scan", cfg.repeats, nq, [&] {
    for (size_t q = 0; q < nq; ++q) {
      report.hamming_results[q] = Ids(KnnLinearScan(codes, ids, query_codes[q], cfg.k));
    }
  });
  size_t visited = 0;
  report.hamming_ball_tree = Time("hamming_ball_tree", cfg.repeats, nq, [&] {
    visited = 0;
    for (size_t q = 0; q < nq; ++q) {
      SearchStats stats;
      report.tree_results[q] = Ids(tree.Search(query_codes[q], cfg.k, nullptr, &stats));
      visited += stats.nodes_visited;
    }
  });
  report.mean_nodes_visited = static_cast<double>(visited) / static_cast<double>(nq);
  return report;
}

}  // namespace lesion::eval
