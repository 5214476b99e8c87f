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

#ifndef LESION_IO_BINARY_H_
#define LESION_IO_BINARY_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lesion/error.h"

namespace lesion::io {

// Little-endian encoder independent of host byte order.
class ByteWriter {
 public:
  void Bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void U32(uint32_t v) { Put(v, 4); }
  void I32(int32_t v) { Put(static_cast<uint32_t>(v), 4); }
  void U64(uint64_t v) { Put(v, 8); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }

  const std::vector<char>& buffer() const { return buf_; }
  std::vector<char> Release() && { return std::move(buf_); }

 private:
  void Put(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> buf_;
};

// Little-endian decoder over an in-memory buffer. Running past the end throws
// kUnexpectedEof with the failing byte offset.
class ByteReader {
 public:
  explicit ByteReader(std::span<const char> data) : data_(data) {}

  size_t offset() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

  std::string_view Bytes(size_t n) {
    Need(n);
    std::string_view out(data_.data() + pos_, n);
    pos_ += n;
    return out;
  }
  uint32_t U32() { return static_cast<uint32_t>(Get(4)); }
  int32_t I32() { return static_cast<int32_t>(static_cast<uint32_t>(Get(4))); }
  uint64_t U64() { return Get(8); }
  float F32() { return std::bit_cast<float>(U32()); }

 private:
  void Need(size_t n) const {
    if (remaining() < n) {
      throw Error(ErrorCode::kUnexpectedEof,
                  "unexpected end of file at byte offset " + std::to_string(pos_) +
                      " (needed " + std::to_string(n) + " bytes, " +
                      std::to_string(remaining()) + " left)");
    }
  }
  uint64_t Get(int n) {
    Need(static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<size_t>(n);
    return v;
  }

  std::span<const char> data_;
  size_t pos_ = 0;
};

// Whole-file helpers; throw kIo on failure.
std::vector<char> ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::span<const char> bytes);

}  // namespace lesion::io

#endif  // LESION_IO_BINARY_H_
