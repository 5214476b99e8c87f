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

#ifndef LESION_IO_EMBEDDING_FILE_H_
#define LESION_IO_EMBEDDING_FILE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lesion/core_model.h"

namespace lesion::io {

// Embedding container, all integers little-endian:
//
//   "EFEM" | u32 version=1 | u32 D | u64 count |
//   count x { u64 record_id | u64 polyp_id | u32 view_id | i32 label | D x f32 }
inline constexpr char kEmbeddingMagic[4] = {'E', 'F', 'E', 'M'};
inline constexpr uint32_t kEmbeddingVersion = 1;

struct EmbeddingRow {
  uint64_t record_id = 0;
  int32_t label = kUnlabeled;
  ViewEmbedding view;  // values hold the f32 payload widened to double
};

struct EmbeddingFile {
  uint32_t dimension = 0;
  std::vector<EmbeddingRow> rows;
};

// Values are narrowed to f32. Throws kDimensionMismatch when a row's length
// differs from `dimension`.
std::vector<char> EncodeEmbeddingFile(const EmbeddingFile& file);

// Every failure (bad magic or version, truncation, trailing bytes, non-finite
// values) is a kParse error whose message carries the byte offset.
EmbeddingFile DecodeEmbeddingFile(std::span<const char> bytes);

EmbeddingFile ReadEmbeddingFile(const std::string& path);
void WriteEmbeddingFile(const std::string& path, const EmbeddingFile& file);

// JSON Lines, one {"polyp_id": u64, "label": i32} object per line; blank
// lines are skipped. Throws kParse with the line number, kUnknownLabel for
// labels below -1.
std::map<uint64_t, int32_t> ParseLabelSidecar(const std::string& text);
std::map<uint64_t, int32_t> ReadLabelSidecar(const std::string& path);

// {"pairs": [[i, j], ...]}
std::vector<std::pair<size_t, size_t>> ParsePairSidecar(const std::string& text);
std::vector<std::pair<size_t, size_t>> ReadPairSidecar(const std::string& path);

}  // namespace lesion::io

#endif  // LESION_IO_EMBEDDING_FILE_H_
