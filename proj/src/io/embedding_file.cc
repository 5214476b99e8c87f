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

#include "lesion/io/embedding_file.h"

#include <cmath>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "lesion/error.h"
#include "lesion/io/binary.h"

namespace lesion::io {
namespace {

[[noreturn]] void ParseFail(size_t offset, const std::string& what) {
  throw Error(ErrorCode::kParse, "malformed embedding file at byte offset " +
                                     std::to_string(offset) + ": " + what);
}

std::string ReadText(const std::string& path) {
  const auto bytes = ReadFile(path);
  return std::string(bytes.begin(), bytes.end());
}

}  // namespace

std::vector<char> EncodeEmbeddingFile(const EmbeddingFile& file) {
  ByteWriter w;
  w.Bytes(std::string_view(kEmbeddingMagic, 4));
  w.U32(kEmbeddingVersion);
  w.U32(file.dimension);
  w.U64(file.rows.size());
  for (const auto& row : file.rows) {
    if (row.view.values.size() != file.dimension) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(row.record_id) + " has dimension " +
                      std::to_string(row.view.values.size()) + ", file has " +
                      std::to_string(file.dimension));
    }
    w.U64(row.record_id);
    w.U64(row.view.polyp_id);
    w.U32(row.view.view_id);
    w.I32(row.label);
    for (double x : row.view.values) w.F32(static_cast<float>(x));
  }
  return std::move(w).Release();
}

EmbeddingFile DecodeEmbeddingFile(std::span<const char> bytes) {
  ByteReader r(bytes);
  try {
    if (r.remaining() < 4 || r.Bytes(4) != std::string_view(kEmbeddingMagic, 4)) {
      ParseFail(0, "bad magic");
    }
    const uint32_t version = r.U32();
    if (version != kEmbeddingVersion) {
      ParseFail(4, "unsupported version " + std::to_string(version));
    }
    EmbeddingFile file;
    file.dimension = r.U32();
    const uint64_t count = r.U64();
    if (file.dimension == 0 && count > 0) ParseFail(8, "zero dimension");
    const size_t row_bytes = 8 + 8 + 4 + 4 + 4 * static_cast<size_t>(file.dimension);
    if (count > r.remaining() / row_bytes) {
      ParseFail(r.offset(), "header declares " + std::to_string(count) +
                                " rows but only " + std::to_string(r.remaining()) +
                                " bytes follow");
    }
    file.rows.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
      EmbeddingRow row;
      row.record_id = r.U64();
      row.view.polyp_id = r.U64();
      row.view.view_id = r.U32();
      row.label = r.I32();
      row.view.values.resize(file.dimension);
      for (auto& x : row.view.values) {
        const size_t at = r.offset();
        const float f = r.F32();
        if (!std::isfinite(f)) ParseFail(at, "non-finite value");
        x = f;
      }
      file.rows.push_back(std::move(row));
    }
    if (r.remaining() != 0) {
      ParseFail(r.offset(), std::to_string(r.remaining()) + " trailing bytes");
    }
    return file;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    ParseFail(r.offset(), e.what());
  }
}

EmbeddingFile ReadEmbeddingFile(const std::string& path) {
  return DecodeEmbeddingFile(ReadFile(path));
}

void WriteEmbeddingFile(const std::string& path, const EmbeddingFile& file) {
  WriteFile(path, EncodeEmbeddingFile(file));
}

std::map<uint64_t, int32_t> ParseLabelSidecar(const std::string& text) {
  std::map<uint64_t, int32_t> labels;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("polyp_id") ||
        !j.contains("label") || !j["polyp_id"].is_number_unsigned() ||
        !j["label"].is_number_integer()) {
      throw Error(ErrorCode::kParse, "label sidecar line " + std::to_string(line_no) +
                                         ": expected {\"polyp_id\": u64, \"label\": int}");
    }
    const auto label = j["label"].get<int64_t>();
    if (label < kUnlabeled || label > INT32_MAX) {
      throw Error(ErrorCode::kUnknownLabel, "label sidecar line " +
                                                std::to_string(line_no) +
                                                ": unknown label value " +
                                                std::to_string(label));
    }
    labels[j["polyp_id"].get<uint64_t>()] = static_cast<int32_t>(label);
  }
  return labels;
}

std::map<uint64_t, int32_t> ReadLabelSidecar(const std::string& path) {
  return ParseLabelSidecar(ReadText(path));
}

std::vector<std::pair<size_t, size_t>> ParsePairSidecar(const std::string& text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("pairs") || !j["pairs"].is_array()) {
    throw Error(ErrorCode::kParse, "pair sidecar: expected {\"pairs\": [[i, j], ...]}");
  }
  std::vector<std::pair<size_t, size_t>> pairs;
  for (const auto& p : j["pairs"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() ||
        !p[1].is_number_unsigned()) {
      throw Error(ErrorCode::kParse, "pair sidecar: malformed pair " + p.dump());
    }
    pairs.emplace_back(p[0].get<size_t>(), p[1].get<size_t>());
  }
  return pairs;
}

std::vector<std::pair<size_t, size_t>> ReadPairSidecar(const std::string& path) {
  return ParsePairSidecar(ReadText(path));
}

}  // namespace lesion::io
