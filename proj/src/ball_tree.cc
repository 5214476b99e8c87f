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

#include "lesion/ball_tree.h"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

#include "lesion/error.h"

namespace lesion {
namespace {

// Bounded max-heap keeping the k smallest (distance, record_id) pairs.
class TopK {
 public:
  explicit TopK(size_t k) : k_(k) { heap_.reserve(k + 1); }

  bool full() const { return heap_.size() >= k_; }
  uint32_t worst_distance() const { return heap_.front().distance; }

  void Offer(Neighbor n) {
    if (heap_.size() < k_) {
      heap_.push_back(n);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (n < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = n;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  RankedNeighbors Finish() && {
    std::sort_heap(heap_.begin(), heap_.end());
    return RankedNeighbors{k_, std::move(heap_)};
  }

 private:
  size_t k_;
  std::vector<Neighbor> heap_;
};

void CheckQuery(uint32_t num_bits, const HashCode& query, size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (query.num_bits() != num_bits) {
    throw Error(ErrorCode::kLengthMismatch,
                "query has " + std::to_string(query.num_bits()) +
                    " bits, index has " + std::to_string(num_bits));
  }
}

bool Excluded(const ExcludeSet* exclude, uint64_t id) {
  return exclude != nullptr && exclude->contains(id);
}

}  // namespace

RankedNeighbors KnnLinearScan(const CodeMatrix& matrix,
                              std::span<const uint64_t> ids,
                              const HashCode& query, size_t k,
                              const ExcludeSet* exclude) {
  if (ids.size() != matrix.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "id count does not match rows");
  }
  CheckQuery(matrix.num_bits(), query, k);
  TopK top(k);
  const uint64_t* q = query.words().data();
  const size_t words = matrix.words_per_row();
  for (size_t i = 0; i < matrix.rows(); ++i) {
    if (Excluded(exclude, ids[i])) continue;
    top.Offer({ids[i], HammingDistanceWords(q, matrix.row_data(i), words)});
  }
  return std::move(top).Finish();
}

BallTreeIndex BallTreeIndex::Build(const CaseStore& store) {
  auto report = ValidateStore(store);
  if (!report.empty()) {
    throw Error(ErrorCode::kInvalidStore, report.front().message);
  }
  if (store.empty()) {
    throw Error(ErrorCode::kEmptyStore, "cannot index empty store");
  }
  CodeMatrix codes(store.hash_bits);
  codes.Reserve(store.size());
  std::vector<uint64_t> ids;
  ids.reserve(store.size());
  for (const auto& r : store.records) {
    codes.Append(r.code);
    ids.push_back(r.record_id);
  }
  return Build(codes, ids, store.index_params.leaf_size,
               store.index_params.build_seed);
}

BallTreeIndex BallTreeIndex::Build(const CodeMatrix& codes,
                                   std::span<const uint64_t> ids,
                                   uint32_t leaf_size, uint64_t build_seed) {
  if (codes.rows() == 0) {
    throw Error(ErrorCode::kEmptyStore, "cannot index empty store");
  }
  if (ids.size() != codes.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "id count does not match rows");
  }
  if (leaf_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "leaf_size must be positive");
  }
  const size_t n = codes.rows();
  const size_t words = codes.words_per_row();
  const uint32_t bits = codes.num_bits();
  auto dist = [&](uint32_t a, uint32_t b) {
    return HammingDistanceWords(codes.row_data(a), codes.row_data(b), words);
  };

  std::vector<uint32_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = static_cast<uint32_t>(i);

  std::mt19937_64 rng(build_seed);
  std::vector<Node> nodes;
  std::vector<uint32_t> counts(bits);
  std::vector<uint64_t> majority(words);
  std::vector<uint32_t> left_rows;
  std::vector<uint32_t> right_rows;

  // Centers hold original row numbers until the final remap.
  nodes.push_back(Node{0, 0, 0, static_cast<uint32_t>(n), -1, -1});
  std::vector<int32_t> stack{0};
  while (!stack.empty()) {
    const int32_t idx = stack.back();
    stack.pop_back();
    const uint32_t begin = nodes[idx].begin;
    const uint32_t end = nodes[idx].end;
    const uint32_t count = end - begin;

    std::fill(counts.begin(), counts.end(), 0);
    for (uint32_t p = begin; p < end; ++p) {
      const uint64_t* row = codes.row_data(perm[p]);
      for (size_t w = 0; w < words; ++w) {
        for (uint64_t x = row[w]; x != 0; x &= x - 1) {
          ++counts[w * 64 + std::countr_zero(x)];
        }
      }
    }
    std::fill(majority.begin(), majority.end(), 0);
    for (uint32_t b = 0; b < bits; ++b) {
      if (2 * counts[b] > count) majority[b >> 6] |= uint64_t{1} << (b & 63);
    }
    uint32_t center = perm[begin];
    uint32_t best = UINT32_MAX;
    for (uint32_t p = begin; p < end; ++p) {
      const uint32_t d =
          HammingDistanceWords(codes.row_data(perm[p]), majority.data(), words);
      if (d < best) {
        best = d;
        center = perm[p];
      }
    }
    uint32_t radius = 0;
    for (uint32_t p = begin; p < end; ++p) {
      radius = std::max(radius, dist(center, perm[p]));
    }
    nodes[idx].center = center;
    nodes[idx].radius = radius;

    const uint64_t draw = rng();
    if (count <= leaf_size) continue;

    const uint32_t seed_row = perm[begin + draw % count];
    auto farthest = [&](uint32_t from) {
      uint32_t arg = perm[begin];
      uint32_t far = 0;
      for (uint32_t p = begin; p < end; ++p) {
        const uint32_t d = dist(from, perm[p]);
        if (d > far) {
          far = d;
          arg = perm[p];
        }
      }
      return std::pair{arg, far};
    };
    const uint32_t pivot_a = farthest(seed_row).first;
    const auto [pivot_b, spread] = farthest(pivot_a);
    if (spread == 0) continue;  // all members identical

    left_rows.clear();
    right_rows.clear();
    bool tie_left = true;
    for (uint32_t p = begin; p < end; ++p) {
      const uint32_t row = perm[p];
      const uint32_t da = dist(pivot_a, row);
      const uint32_t db = dist(pivot_b, row);
      if (da < db || (da == db && tie_left)) {
        left_rows.push_back(row);
      } else {
        right_rows.push_back(row);
      }
      if (da == db) tie_left = !tie_left;
    }
    std::copy(left_rows.begin(), left_rows.end(), perm.begin() + begin);
    std::copy(right_rows.begin(), right_rows.end(),
              perm.begin() + begin + left_rows.size());
    const uint32_t mid = begin + static_cast<uint32_t>(left_rows.size());

    const int32_t left = static_cast<int32_t>(nodes.size());
    nodes.push_back(Node{0, 0, begin, mid, -1, -1});
    const int32_t right = static_cast<int32_t>(nodes.size());
    nodes.push_back(Node{0, 0, mid, end, -1, -1});
    nodes[idx].left = left;
    nodes[idx].right = right;
    stack.push_back(right);
    stack.push_back(left);
  }

  BallTreeIndex index;
  index.leaf_size_ = leaf_size;
  index.build_seed_ = build_seed;
  index.points_ = CodeMatrix(bits);
  index.points_.Reserve(n);
  index.ids_.reserve(n);
  std::vector<uint32_t> position(n);
  for (size_t p = 0; p < n; ++p) {
    index.points_.AppendWords(codes.row(perm[p]));
    index.ids_.push_back(ids[perm[p]]);
    position[perm[p]] = static_cast<uint32_t>(p);
  }
  for (auto& node : nodes) node.center = position[node.center];
  index.nodes_ = std::move(nodes);
  return index;
}

RankedNeighbors BallTreeIndex::Search(const HashCode& query, size_t k,
                                      const ExcludeSet* exclude,
                                      SearchStats* stats) const {
  CheckQuery(num_bits(), query, k);
  TopK top(k);
  SearchStats local;
  const uint64_t* q = query.words().data();
  const size_t words = points_.words_per_row();

  auto lower_bound = [&](const Node& node) {
    const uint32_t d =
        HammingDistanceWords(q, points_.row_data(node.center), words);
    ++local.distance_evaluations;
    return d > node.radius ? d - node.radius : 0u;
  };

  std::vector<std::pair<int32_t, uint32_t>> stack;
  if (!nodes_.empty()) stack.emplace_back(0, lower_bound(nodes_[0]));
  while (!stack.empty()) {
    const auto [idx, bound] = stack.back();
    stack.pop_back();
    if (top.full() && bound > top.worst_distance()) continue;
    ++local.nodes_visited;
    const Node& node = nodes_[idx];
    if (node.is_leaf()) {
      for (uint32_t p = node.begin; p < node.end; ++p) {
        if (Excluded(exclude, ids_[p])) continue;
        ++local.distance_evaluations;
        top.Offer({ids_[p], HammingDistanceWords(q, points_.row_data(p), words)});
      }
      continue;
    }
    const uint32_t lb_left = lower_bound(nodes_[node.left]);
    const uint32_t lb_right = lower_bound(nodes_[node.right]);
    // Nearer child is pushed last so it is explored first.
    if (lb_left <= lb_right) {
      stack.emplace_back(node.right, lb_right);
      stack.emplace_back(node.left, lb_left);
    } else {
      stack.emplace_back(node.left, lb_left);
      stack.emplace_back(node.right, lb_right);
    }
  }
  if (stats != nullptr) *stats = local;
  return std::move(top).Finish();
}

}  // namespace lesion
