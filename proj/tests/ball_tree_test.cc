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

#include <gtest/gtest.h>

#include "lesion/error.h"
#include "testing/oracles.h"

namespace lesion {
namespace {

using testing::CodeFromSigns;
using testing::RandomSigns;
using testing::SignsFromCode;

struct Fixture {
  std::vector<HashCode> codes;
  std::vector<uint64_t> ids;
  CodeMatrix matrix;
};

Fixture Make(std::mt19937_64& rng, size_t n, uint32_t bits, bool clustered) {
  Fixture f;
  f.codes = clustered ? testing::ClusteredCodes(rng, n, bits, 1 + rng() % 8, 0.02)
                      : std::vector<HashCode>{};
  for (size_t i = 0; f.codes.size() < n; ++i) f.codes.push_back(CodeFromSigns(RandomSigns(rng, bits)));
  for (size_t i = 0; i < n; ++i) f.ids.push_back(5 * i + rng() % 5);
  std::shuffle(f.ids.begin(), f.ids.end(), rng);
  f.matrix = PackCodes(f.codes, bits);
  return f;
}

std::vector<Neighbor> Oracle(const Fixture& f, const HashCode& q, size_t k,
                             const ExcludeSet* exclude = nullptr) {
  std::vector<testing::Signs> rows;
  for (const auto& c : f.codes) rows.push_back(SignsFromCode(c));
  return testing::NaiveKnn(rows, f.ids, SignsFromCode(q), k, exclude);
}

TEST(KnnLinearScan, Examples) {
  std::mt19937_64 rng(1);
  const Fixture f = Make(rng, 100, 96, false);
  const auto r = KnnLinearScan(f.matrix, f.ids, f.codes[17], 5);
  ASSERT_EQ(r.entries.size(), 5u);
  EXPECT_EQ(r.entries[0].record_id, f.ids[17]);
  EXPECT_EQ(r.entries[0].distance, 0u);
  EXPECT_EQ(r.entries, Oracle(f, f.codes[17], 5));
  EXPECT_EQ(KnnLinearScan(f.matrix, f.ids, f.codes[0], 500).entries.size(), 100u);
}

TEST(KnnLinearScan, EmptyAndErrors) {
  const CodeMatrix empty(64);
  EXPECT_TRUE(KnnLinearScan(empty, {}, HashCode(64), 3).entries.empty());
  EXPECT_THROW(KnnLinearScan(empty, {}, HashCode(65), 3), Error);
  EXPECT_THROW(KnnLinearScan(empty, {}, HashCode(64), 0), Error);
}

TEST(BallTree, SmallStoreIsSingleLeaf) {
  std::mt19937_64 rng(2);
  const Fixture f = Make(rng, 20, 64, false);
  const auto tree = BallTreeIndex::Build(f.matrix, f.ids, 32, 0);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_TRUE(tree.nodes()[0].is_leaf());
}

TEST(BallTree, EmptyStoreRejected) {
  try {
    BallTreeIndex::Build(CaseStore{8, 8, {}, {}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyStore);
    EXPECT_STREQ(e.what(), "cannot index empty store");
  }
}

// Every node's members lie within its radius of its center; leaves partition
// the points; children partition their parent.
void Audit(const BallTreeIndex& tree) {
  std::vector<int> leaf_count(tree.size(), 0);
  const auto& pts = tree.points();
  for (const auto& node : tree.nodes()) {
    ASSERT_LT(node.begin, node.end);
    ASSERT_GE(node.center, node.begin);
    ASSERT_LT(node.center, node.end);
    uint32_t max_d = 0;
    for (uint32_t i = node.begin; i < node.end; ++i) {
      const uint32_t d = HammingDistanceWords(pts.row_data(i), pts.row_data(node.center),
                                              pts.words_per_row());
      EXPECT_LE(d, node.radius);
      max_d = std::max(max_d, d);
    }
    EXPECT_EQ(max_d, node.radius);
    if (node.is_leaf()) {
      for (uint32_t i = node.begin; i < node.end; ++i) ++leaf_count[i];
    } else {
      const auto& l = tree.nodes()[node.left];
      const auto& r = tree.nodes()[node.right];
      EXPECT_EQ(l.begin, node.begin);
      EXPECT_EQ(l.end, r.begin);
      EXPECT_EQ(r.end, node.end);
    }
  }
  for (int c : leaf_count) EXPECT_EQ(c, 1);
}

TEST(BallTree, NodeAudit) {
  std::mt19937_64 rng(3);
  for (bool clustered : {false, true}) {
    const Fixture f = Make(rng, 1000, 128, clustered);
    Audit(BallTreeIndex::Build(f.matrix, f.ids, 8, 42));
  }
}

TEST(BallTree, AllDuplicatesBecomeOneLeaf) {
  Fixture f;
  for (uint64_t i = 0; i < 100; ++i) {
    f.codes.push_back(HashCode(64));
    f.ids.push_back(i);
  }
  f.matrix = PackCodes(f.codes, 64);
  const auto tree = BallTreeIndex::Build(f.matrix, f.ids, 4, 0);
  EXPECT_EQ(tree.nodes().size(), 1u);
  const auto r = tree.Search(HashCode(64), 3);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[2].record_id, 2u);
}

TEST(BallTree, DeterministicBuild) {
  std::mt19937_64 rng(4);
  const Fixture f = Make(rng, 700, 200, true);
  const auto a = BallTreeIndex::Build(f.matrix, f.ids, 16, 7);
  const auto b = BallTreeIndex::Build(f.matrix, f.ids, 16, 7);
  EXPECT_EQ(a.nodes(), b.nodes());
  EXPECT_EQ(a.ids(), b.ids());
  EXPECT_EQ(a.points(), b.points());
}

TEST(BallTree, MatchesOracleOnRandomCases) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 120; ++t) {
    const size_t n = 1 + rng() % 600;
    const uint32_t bits = std::vector<uint32_t>{7, 64, 100, 256}[rng() % 4];
    const Fixture f = Make(rng, n, bits, rng() % 2 == 0);
    const auto tree = BallTreeIndex::Build(f.matrix, f.ids, 1 + rng() % 40, rng());
    const size_t k = 1 + rng() % 12;
    HashCode q = rng() % 3 == 0 ? f.codes[rng() % n] : CodeFromSigns(RandomSigns(rng, bits));
    ExcludeSet exclude;
    if (rng() % 2) {
      for (int e = 0; e < 5; ++e) exclude.insert(f.ids[rng() % n]);
    }
    const auto expected = Oracle(f, q, k, &exclude);
    EXPECT_EQ(tree.Search(q, k, &exclude).entries, expected);
    EXPECT_EQ(KnnLinearScan(f.matrix, f.ids, q, k, &exclude).entries, expected);
  }
}

TEST(BallTree, KEqualsNReturnsAllSorted) {
  std::mt19937_64 rng(6);
  const Fixture f = Make(rng, 300, 64, true);
  const auto tree = BallTreeIndex::Build(f.matrix, f.ids, 8, 1);
  const HashCode q = CodeFromSigns(RandomSigns(rng, 64));
  const auto r = tree.Search(q, 300);
  EXPECT_EQ(r.entries.size(), 300u);
  EXPECT_TRUE(std::is_sorted(r.entries.begin(), r.entries.end()));
  EXPECT_EQ(r.entries, Oracle(f, q, 300));
}

TEST(BallTree, TightClusterPrunes) {
  std::mt19937_64 rng(7);
  const auto a = RandomSigns(rng, 256);
  auto b = a;
  for (auto& x : b) x = -x;
  Fixture f;
  std::bernoulli_distribution flip(0.03);
  for (uint64_t i = 0; i < 2000; ++i) {
    auto s = i % 2 ? a : b;
    for (auto& x : s) {
      if (flip(rng)) x = -x;
    }
    f.codes.push_back(CodeFromSigns(s));
    f.ids.push_back(i);
  }
  f.matrix = PackCodes(f.codes, 256);
  const auto tree = BallTreeIndex::Build(f.matrix, f.ids, 16, 3);
  SearchStats stats;
  const auto r = tree.Search(CodeFromSigns(a), 6, nullptr, &stats);
  EXPECT_LT(stats.nodes_visited, tree.nodes().size());
  EXPECT_LT(stats.distance_evaluations, f.codes.size());
  EXPECT_EQ(r.entries, Oracle(f, CodeFromSigns(a), 6));
}

TEST(BallTree, QueryLengthMismatch) {
  std::mt19937_64 rng(8);
  const Fixture f = Make(rng, 50, 64, false);
  const auto tree = BallTreeIndex::Build(f.matrix, f.ids, 8, 1);
  try {
    tree.Search(HashCode(65), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

}  // namespace
}  // namespace lesion
