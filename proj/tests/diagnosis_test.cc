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

#include "lesion/diagnosis.h"

#include <algorithm>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "lesion/error.h"
#include "testing/oracles.h"

namespace lesion {
namespace {

RankedNeighbors Ranked(std::vector<std::pair<uint64_t, uint32_t>> entries) {
  RankedNeighbors r;
  r.k = entries.size();
  for (auto [id, d] : entries) r.entries.push_back({id, d});
  return r;
}

LabelLookup Labels(std::map<uint64_t, int32_t> m) {
  return [m](uint64_t id) {
    auto it = m.find(id);
    return it == m.end() ? kUnlabeled : it->second;
  };
}

TEST(MajorityVote, StrictMajority) {
  const auto d = MajorityVote(Ranked({{1, 0}, {2, 1}, {3, 2}}), Labels({{1, 1}, {2, 1}, {3, 0}}), 2);
  EXPECT_EQ(d.predicted_label, 1);
  EXPECT_EQ(d.class_votes, (std::vector<uint32_t>{1, 2}));
  EXPECT_EQ(d.k_used, 3u);
}

TEST(MajorityVote, SingleNeighbor) {
  EXPECT_EQ(MajorityVote(Ranked({{1, 4}}), Labels({{1, 0}}), 2).predicted_label, 0);
}

TEST(MajorityVote, TieGoesToNearestTiedClass) {
  auto d = MajorityVote(Ranked({{8, 2}, {3, 5}}), Labels({{8, 0}, {3, 1}}), 2);
  EXPECT_EQ(d.predicted_label, 0);
  d = MajorityVote(Ranked({{8, 2}, {3, 5}}), Labels({{8, 1}, {3, 0}}), 2);
  EXPECT_EQ(d.predicted_label, 1);
  // Class 2 is nearest but not tied for the maximum.
  d = MajorityVote(Ranked({{1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 3}}),
                   Labels({{1, 2}, {2, 1}, {3, 0}, {4, 0}, {5, 1}}), 3);
  EXPECT_EQ(d.predicted_label, 1);
}

TEST(MajorityVote, UnlabeledNeighborsKeptButSilent) {
  const auto d = MajorityVote(Ranked({{1, 0}, {2, 1}, {3, 2}}), Labels({{2, 1}}), 2);
  EXPECT_EQ(d.predicted_label, 1);
  EXPECT_EQ(d.class_votes, (std::vector<uint32_t>{0, 1}));
  EXPECT_EQ(d.neighbors.entries.size(), 3u);
  EXPECT_EQ(d.class_scores, (std::vector<double>{0.0, 1.0}));
}

TEST(MajorityVote, Errors) {
  try {
    MajorityVote(Ranked({{1, 0}}), Labels({}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoLabeledEvidence);
    EXPECT_NE(std::string(e.what()).find("no labeled evidence"), std::string::npos);
  }
  EXPECT_THROW(MajorityVote(Ranked({{1, 0}}), Labels({{1, 0}}), 1), Error);
}

TEST(ClassScoreVector, Examples) {
  Diagnosis d;
  d.class_votes = {2, 4};
  const auto s = ClassScoreVector(d);
  EXPECT_DOUBLE_EQ(s[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(s[1], 2.0 / 3);
  d.class_votes = {6, 0};
  EXPECT_EQ(ClassScoreVector(d), (std::vector<double>{1, 0}));
  d.class_votes = {3, 3};
  EXPECT_EQ(ClassScoreVector(d), (std::vector<double>{0.5, 0.5}));
}

SceneEmbedding AsScene(const HashCode& c, uint64_t id) { return {id, c.ToSigns()}; }

TEST(Diagnose, SelfRetrievalAndExclusion) {
  std::mt19937_64 rng(1);
  const CaseStore store = testing::RandomStore(rng, 200, 64, 3);
  const CaseDatabase db(store);
  std::vector<HashCode> codes;
  std::vector<uint64_t> ids;
  for (const auto& rec : store.records) {
    codes.push_back(rec.code);
    ids.push_back(rec.record_id);
  }
  const CodeMatrix matrix = PackCodes(codes, 64);
  for (const auto& rec : store.records) {
    if (rec.label == kUnlabeled) continue;
    const auto d = Diagnose(db, AsScene(rec.code, rec.polyp_id), 1);
    ASSERT_EQ(d.neighbors.entries.size(), 1u);
    EXPECT_EQ(d.neighbors.entries[0].distance, 0u);
    EXPECT_EQ(d.predicted_label, rec.label);

    ExcludeSet self = {rec.record_id};
    const auto r = Retrieve(db, AsScene(rec.code, rec.polyp_id), 1, {}, &self);
    ASSERT_EQ(r.neighbors.entries.size(), 1u);
    EXPECT_NE(r.neighbors.entries[0].record_id, rec.record_id);
    EXPECT_EQ(r.neighbors.entries,
              KnnLinearScan(matrix, ids, rec.code, 1, &self).entries);
  }
}

TEST(Diagnose, TwoClusterStore) {
  std::mt19937_64 rng(2);
  const uint32_t bits = 256;
  const auto c0 = testing::RandomSigns(rng, bits);
  auto c1 = c0;
  for (uint32_t k = 0; k < bits / 2; ++k) c1[k] = -c1[k];  // centroids 128 bits apart
  std::bernoulli_distribution flip(0.05);
  std::vector<LesionRecord> records;
  for (uint64_t i = 0; i < 200; ++i) {
    auto s = i % 2 ? c1 : c0;
    for (auto& x : s) {
      if (flip(rng)) x = -x;
    }
    records.push_back({i, i, testing::CodeFromSigns(s), static_cast<int32_t>(i % 2)});
  }
  const CaseDatabase db(MakeCaseStore(bits, records));
  auto q = c1;
  for (auto& x : q) {
    if (flip(rng)) x = -x;
  }
  Vector values(q.begin(), q.end());
  const auto d = Diagnose(db, SceneEmbedding{999, values}, 6);
  EXPECT_EQ(d.predicted_label, 1);
  EXPECT_EQ(d.class_votes, (std::vector<uint32_t>{0, 6}));
}

TEST(Diagnose, MultiViewQueryFusesFirst) {
  std::vector<LesionRecord> records = {
      {1, 1, SignQuantize(Vector{1, 1, -1, -1}), 0},
      {2, 2, SignQuantize(Vector{-1, -1, 1, 1}), 1}};
  const CaseDatabase db(MakeCaseStore(4, records));
  MultiViewScene scene;
  scene.polyp_id = 5;
  scene.views = {{5, 0, {2, 1, -1, -3}}, {5, 1, {1, 2, -2, -1}}};
  const auto d = Diagnose(db, scene, 1);
  EXPECT_EQ(d.predicted_label, 0);
  EXPECT_EQ(d.neighbors.entries[0].distance, 0u);
}

TEST(Diagnose, Errors) {
  std::mt19937_64 rng(3);
  const CaseDatabase db(testing::RandomStore(rng, 3, 16, 2));
  try {
    Diagnose(db, SceneEmbedding{1, Vector(15, 1.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
  ExcludeSet all;
  for (const auto& r : db.store().records) all.insert(r.record_id);
  try {
    Diagnose(db, SceneEmbedding{1, Vector(16, 1.0)}, 6, {}, &all);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCandidates);
  }
}

TEST(Diagnose, InvariantToRecordOrder) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    CaseStore store = testing::RandomStore(rng, 150, 32, 3);
    const CaseDatabase a(store);
    std::shuffle(store.records.begin(), store.records.end(), rng);
    const CaseDatabase b(store);
    for (int q = 0; q < 10; ++q) {
      const SceneEmbedding query{0, testing::CodeFromSigns(testing::RandomSigns(rng, 32)).ToSigns()};
      try {
        const auto da = Diagnose(a, query, 6);
        const auto db_ = Diagnose(b, query, 6);
        EXPECT_EQ(da.predicted_label, db_.predicted_label);
        EXPECT_EQ(da.class_scores, db_.class_scores);
        EXPECT_EQ(da.neighbors, db_.neighbors);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kNoLabeledEvidence);
      }
    }
  }
}

TEST(Diagnose, UnlabeledRecordNeverChangesVotes) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    CaseStore store = testing::RandomStore(rng, 100, 32, 2);
    const CaseDatabase before(store);
    const SceneEmbedding query{0, testing::CodeFromSigns(testing::RandomSigns(rng, 32)).ToSigns()};
    // An unlabeled copy of the query itself sits at distance 0 and ranks
    // first, but must not vote.
    store.records.push_back({1u << 30, 1u << 30, SignQuantize(query.values), kUnlabeled});
    const CaseDatabase after(store);
    const auto nb = after.Search(SignQuantize(query.values), 7);
    const auto labels = [&](uint64_t id) { return after.LabelOf(id); };
    const auto nb_before = before.Search(SignQuantize(query.values), 6);
    EXPECT_EQ(MajorityVote(nb, labels, 2).class_votes,
              MajorityVote(nb_before, [&](uint64_t id) { return before.LabelOf(id); }, 2)
                  .class_votes);
  }
}

TEST(CaseDatabase, RecordIdsForPolyp) {
  std::vector<LesionRecord> records = {{10, 1, HashCode(8), -1},
                                       {4, 1, HashCode(8), -1},
                                       {7, 2, HashCode(8), -1}};
  const CaseDatabase db(MakeCaseStore(8, records));
  EXPECT_EQ(db.RecordIdsForPolyp(1), (std::vector<uint64_t>{4, 10}));
  EXPECT_TRUE(db.RecordIdsForPolyp(3).empty());
}

}  // namespace
}  // namespace lesion
