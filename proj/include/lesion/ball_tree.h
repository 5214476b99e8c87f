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

#ifndef LESION_BALL_TREE_H_
#define LESION_BALL_TREE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "lesion/core_model.h"
#include "lesion/hashing.h"

namespace lesion {

struct Neighbor {
  uint64_t record_id = 0;
  uint32_t distance = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
  friend auto operator<=>(const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance <=> b.distance;
    return a.record_id <=> b.record_id;
  }
};

// Sorted by (distance, record_id) ascending; at most k entries.
struct RankedNeighbors {
  size_t k = 0;
  std::vector<Neighbor> entries;

  friend bool operator==(const RankedNeighbors&, const RankedNeighbors&) = default;
};

using ExcludeSet = std::unordered_set<uint64_t>;

// Exact reference search: scans every row. Returns all rows when fewer than
// k are available; an empty matrix yields an empty result. Throws
// kLengthMismatch when the query length differs from the matrix,
// kInvalidArgument when k == 0 or ids.size() != matrix.rows().
RankedNeighbors KnnLinearScan(const CodeMatrix& matrix,
                              std::span<const uint64_t> ids,
                              const HashCode& query, size_t k,
                              const ExcludeSet* exclude = nullptr);

struct SearchStats {
  size_t nodes_visited = 0;
  size_t distance_evaluations = 0;
};

// Ball tree over Hamming space.
//
// Nodes split by the farthest-point rule: a seed member is drawn from the
// build RNG, pivot A is the member farthest from it, pivot B the member
// farthest from A, and each member goes to the nearer pivot (equidistant
// members alternate). A node's center is the member closest to the bitwise
// majority code of the node; its radius is the largest member distance from
// that center. Distance ties everywhere resolve to the lower position. The
// structure depends only on (codes, ids, leaf_size, build_seed).
class BallTreeIndex {
 public:
  struct Node {
    uint32_t center = 0;  // row in points()
    uint32_t radius = 0;
    uint32_t begin = 0;   // member rows are [begin, end) of points()
    uint32_t end = 0;
    int32_t left = -1;    // -1 for leaves
    int32_t right = -1;

    bool is_leaf() const { return left < 0; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  BallTreeIndex() = default;

  // Throws kEmptyStore on zero rows and kInvalidArgument for leaf_size == 0 or
  // an id count that does not match the matrix.
  static BallTreeIndex Build(const CodeMatrix& codes,
                             std::span<const uint64_t> ids, uint32_t leaf_size,
                             uint64_t build_seed);

  // Uses the store's index_params. Throws kInvalidStore if the store fails
  // validation and kEmptyStore ("cannot index empty store") if it is empty.
  static BallTreeIndex Build(const CaseStore& store);

  // Identical output to KnnLinearScan over the same codes and ids. A subtree
  // is skipped when max(0, d(query, center) - radius) exceeds the current
  // k-th best distance.
  RankedNeighbors Search(const HashCode& query, size_t k,
                         const ExcludeSet* exclude = nullptr,
                         SearchStats* stats = nullptr) const;

  const std::vector<Node>& nodes() const { return nodes_; }
  // Codes in tree order; row i belongs to ids()[i].
  const CodeMatrix& points() const { return points_; }
  const std::vector<uint64_t>& ids() const { return ids_; }
  uint32_t num_bits() const { return points_.num_bits(); }
  size_t size() const { return ids_.size(); }
  uint32_t leaf_size() const { return leaf_size_; }
  uint64_t build_seed() const { return build_seed_; }

 private:
  std::vector<Node> nodes_;
  CodeMatrix points_;
  std::vector<uint64_t> ids_;
  uint32_t leaf_size_ = 0;
  uint64_t build_seed_ = 0;
};

}  // namespace lesion

#endif  // LESION_BALL_TREE_H_
