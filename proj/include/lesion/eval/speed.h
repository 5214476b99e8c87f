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

#ifndef LESION_EVAL_SPEED_H_
#define LESION_EVAL_SPEED_H_

#include <cstdint>
#include <string>
#include <vector>

namespace lesion::eval {

enum class DataDistribution { kClustered, kUniform };

struct SpeedBenchmarkConfig {
  size_t n = 50000;
  uint32_t dim = 1024;
  DataDistribution distribution = DataDistribution::kClustered;
  size_t repeats = 5;
  size_t num_queries = 100;
  size_t k = 6;
  uint32_t leaf_size = 32;
  uint64_t seed = 1;
};

struct MethodTiming {
  std::string method;
  double median_qps = 0.0;
  std::vector<double> qps;  // one entry per repeat
};

// Query throughput of float cosine scan, packed Hamming scan and the Hamming
// ball tree over the same data. Runs on the calling thread only.
struct SpeedReport {
  SpeedBenchmarkConfig config;
  size_t workers = 1;
  MethodTiming cosine_linear;
  MethodTiming hamming_linear;
  MethodTiming hamming_ball_tree;
  double tree_build_seconds = 0.0;
  size_t tree_nodes = 0;
  double mean_nodes_visited = 0.0;
  // Per query, the returned record ids in rank order.
  std::vector<std::vector<uint64_t>> cosine_results;
  std::vector<std::vector<uint64_t>> hamming_results;
  std::vector<std::vector<uint64_t>> tree_results;
};

// Throws kInvalidArgument when n == 0, dim == 0, k == 0 or repeats < 3.
SpeedReport RunSpeedBenchmark(const SpeedBenchmarkConfig& cfg);

const char* DistributionName(DataDistribution d);

}  // namespace lesion::eval

#endif  // LESION_EVAL_SPEED_H_
