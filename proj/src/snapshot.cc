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

#include <string>
#include <string_view>

#include "lesion/error.h"
#include "lesion/io/binary.h"

namespace lesion {

std::vector<char> EncodeSnapshot(const CaseStore& store) {
  auto report = ValidateStore(store);
  if (!report.empty()) {
    throw Error(ErrorCode::kInvalidStore,
                "refusing to save invalid store: " + report.front().message);
  }
  io::ByteWriter w;
  w.Bytes(std::string_view(kSnapshotMagic, 4));
  w.U32(kSnapshotVersion);
  w.U32(store.hash_bits);
  w.U32(store.index_params.leaf_size);
  w.U64(store.index_params.build_seed);
  w.U32(store.label_space.num_classes);
  w.U64(store.records.size());
  for (const auto& r : store.records) {
    w.U64(r.record_id);
    w.U64(r.polyp_id);
    w.I32(r.label);
    for (uint64_t word : r.code.words()) w.U64(word);
  }
  return std::move(w).Release();
}

CaseStore DecodeSnapshot(std::span<const char> bytes) {
  io::ByteReader r(bytes);
  if (r.remaining() < 4) {
    throw Error(ErrorCode::kUnexpectedEof, "unexpected end of file: no snapshot header");
  }
  if (r.Bytes(4) != std::string_view(kSnapshotMagic, 4)) {
    throw Error(ErrorCode::kBadMagic, "bad magic: not a snapshot file");
  }
  const uint32_t version = r.U32();
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::kBadVersion,
                "unsupported snapshot version " + std::to_string(version));
  }
  CaseStore store;
  store.hash_bits = r.U32();
  store.dimension = store.hash_bits;
  store.index_params.leaf_size = r.U32();
  store.index_params.build_seed = r.U64();
  store.label_space.num_classes = r.U32();
  const uint64_t n = r.U64();
  const size_t words = WordsForBits(store.hash_bits);
  const size_t record_bytes = 8 + 8 + 4 + 8 * words;
  if (n > r.remaining() / record_bytes) {
    // Report truncation up front instead of after a huge allocation.
    throw Error(ErrorCode::kUnexpectedEof,
                "unexpected end of file: header declares " + std::to_string(n) +
                    " records but only " + std::to_string(r.remaining()) +
                    " bytes follow");
  }
  store.records.reserve(n);
  std::vector<uint64_t> code_words(words);
  for (uint64_t i = 0; i < n; ++i) {
    LesionRecord rec;
    rec.record_id = r.U64();
    rec.polyp_id = r.U64();
    rec.label = r.I32();
    for (auto& wd : code_words) wd = r.U64();
    try {
      rec.code = HashCode::FromWords(store.hash_bits, code_words);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidStore,
                  "record " + std::to_string(rec.record_id) + ": " + e.what());
    }
    store.records.push_back(std::move(rec));
  }
  if (r.remaining() != 0) {
    throw Error(ErrorCode::kTrailingData,
                std::to_string(r.remaining()) + " trailing bytes after records");
  }
  auto report = ValidateStore(store);
  if (!report.empty()) {
    throw Error(ErrorCode::kInvalidStore, report.front().message);
  }
  return store;
}

size_t SaveSnapshot(const CaseStore& store, const std::string& path) {
  const auto bytes = EncodeSnapshot(store);
  io::WriteFile(path, bytes);
  return bytes.size();
}

CaseStore LoadSnapshot(const std::string& path) {
  return DecodeSnapshot(io::ReadFile(path));
}

}  // namespace lesion
