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

#ifndef LESION_SNAPSHOT_H_
#define LESION_SNAPSHOT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lesion/core_model.h"

namespace lesion {

// Snapshot layout, all integers little-endian:
//
//   "EFIX" | u32 version=1 | u32 K | u32 leaf_size | u64 build_seed |
//   u32 C (0 = no label space) | u64 N |
//   N x { u64 record_id | u64 polyp_id | i32 label | ceil(K/64) x u64 words }
//
// Only codes and metadata are stored. The ball tree is rebuilt from
// (codes, leaf_size, build_seed) after loading. A loaded store reports
// dimension == K. Class names are not persisted.
inline constexpr char kSnapshotMagic[4] = {'E', 'F', 'I', 'X'};
inline constexpr uint32_t kSnapshotVersion = 1;

std::vector<char> EncodeSnapshot(const CaseStore& store);

// Throws kBadMagic, kBadVersion, kUnexpectedEof, kTrailingData or
// kInvalidStore.
CaseStore DecodeSnapshot(std::span<const char> bytes);

// Returns the number of bytes written.
size_t SaveSnapshot(const CaseStore& store, const std::string& path);
CaseStore LoadSnapshot(const std::string& path);

}  // namespace lesion

#endif  // LESION_SNAPSHOT_H_
