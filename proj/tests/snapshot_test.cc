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

#include "lesion/snapshot.h"

#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "lesion/ball_tree.h"
#include "lesion/error.h"
#include "testing/oracles.h"

namespace lesion {
namespace {

ErrorCode DecodeError(const std::vector<char>& bytes) {
  try {
    DecodeSnapshot(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return ErrorCode::kIo;
}

TEST(Snapshot, GoldenLayout) {
  std::vector<LesionRecord> records = {
      {0x0102, 0x0a, HashCode::FromWords(3, {0b101}), 1},
      {0x0203, 0x0b, HashCode::FromWords(3, {0b010}), 0}};
  const CaseStore store = MakeCaseStore(3, records, {4, 0x1122334455667788ULL});
  const auto bytes = EncodeSnapshot(store);
  const std::vector<unsigned char> expected = {
      'E', 'F', 'I', 'X',                              // magic
      1, 0, 0, 0,                                      // version
      3, 0, 0, 0,                                      // K
      4, 0, 0, 0,                                      // leaf_size
      0x88, 0x77, 0x66, 0x55, 0x44, 0x33, 0x22, 0x11,  // build_seed
      2, 0, 0, 0,                                      // C
      2, 0, 0, 0, 0, 0, 0, 0,                          // N
      0x02, 0x01, 0, 0, 0, 0, 0, 0,                    // record_id
      0x0a, 0, 0, 0, 0, 0, 0, 0,                       // polyp_id
      1, 0, 0, 0,                                      // label
      0b101, 0, 0, 0, 0, 0, 0, 0,                      // code word
      0x03, 0x02, 0, 0, 0, 0, 0, 0,
      0x0b, 0, 0, 0, 0, 0, 0, 0,
      0, 0, 0, 0,
      0b010, 0, 0, 0, 0, 0, 0, 0};
  ASSERT_EQ(bytes.size(), expected.size());
  for (size_t i = 0; i < bytes.size(); ++i) {
    EXPECT_EQ(static_cast<unsigned char>(bytes[i]), expected[i]) << "byte " << i;
  }
}

TEST(Snapshot, RoundTripIsExactAndByteStable) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const CaseStore store = testing::RandomStore(rng, 1 + rng() % 300,
                                                 std::vector<uint32_t>{1, 64, 65, 300}[rng() % 4],
                                                 rng() % 4);
    const auto bytes = EncodeSnapshot(store);
    const CaseStore loaded = DecodeSnapshot(bytes);
    EXPECT_EQ(loaded, store);
    EXPECT_EQ(EncodeSnapshot(loaded), bytes);

    const auto a = BallTreeIndex::Build(store);
    const auto b = BallTreeIndex::Build(loaded);
    EXPECT_EQ(a.nodes(), b.nodes());
    const HashCode q = testing::CodeFromSigns(testing::RandomSigns(rng, store.hash_bits));
    EXPECT_EQ(a.Search(q, 5), b.Search(q, 5));
  }
}

TEST(Snapshot, FileRoundTrip) {
  std::mt19937_64 rng(2);
  const CaseStore store = testing::RandomStore(rng, 50, 128, 2);
  const auto path = (std::filesystem::temp_directory_path() / "lesion_snapshot_test.efix").string();
  const size_t written = SaveSnapshot(store, path);
  EXPECT_EQ(written, std::filesystem::file_size(path));
  EXPECT_EQ(LoadSnapshot(path), store);
  std::filesystem::remove(path);
}

TEST(Snapshot, DistinctErrors) {
  std::mt19937_64 rng(3);
  const auto good = EncodeSnapshot(testing::RandomStore(rng, 10, 70, 2));

  auto bad = good;
  bad[0] = 'X';
  EXPECT_EQ(DecodeError(bad), ErrorCode::kBadMagic);
  try {
    DecodeSnapshot(bad);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
  }

  bad = good;
  bad[4] = 2;
  EXPECT_EQ(DecodeError(bad), ErrorCode::kBadVersion);

  for (size_t cut = 0; cut < good.size(); ++cut) {
    const std::vector<char> prefix(good.begin(), good.begin() + cut);
    ASSERT_EQ(DecodeError(prefix), ErrorCode::kUnexpectedEof) << "cut at " << cut;
  }
  try {
    DecodeSnapshot(std::vector<char>(good.begin(), good.end() - 3));
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unexpected end of file"), std::string::npos);
  }

  bad = good;
  bad.push_back(0);
  EXPECT_EQ(DecodeError(bad), ErrorCode::kTrailingData);

  // Set a pad bit in the last word of the first record (K = 70).
  bad = good;
  const size_t header = 4 + 4 + 4 + 4 + 8 + 4 + 8;
  bad[header + 8 + 8 + 4 + 8 + 7] = static_cast<char>(0x80);
  EXPECT_EQ(DecodeError(bad), ErrorCode::kInvalidStore);
}

TEST(Snapshot, RefusesInvalidStore) {
  CaseStore s;
  s.dimension = s.hash_bits = 8;
  s.records = {{1, 1, HashCode(8), -1}, {1, 2, HashCode(8), -1}};
  EXPECT_THROW(EncodeSnapshot(s), Error);
}

}  // namespace
}  // namespace lesion
