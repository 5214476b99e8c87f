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

#ifndef LESION_HASHING_H_
#define LESION_HASHING_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lesion {

// Binary code in {-1,+1}^K packed into 64-bit words.
//
// Bit layout (normative for every on-disk format): component k lives in word
// k / 64 at bit position k % 64, least significant bit first. A set bit
// encodes +1, a clear bit encodes -1. Bits at positions >= K in the last word
// are always zero.
class HashCode {
 public:
  HashCode() = default;

  // All components -1.
  explicit HashCode(uint32_t num_bits);

  // Throws kInvalidArgument if the word count is wrong or pad bits are set.
  static HashCode FromWords(uint32_t num_bits, std::vector<uint64_t> words);

  uint32_t num_bits() const { return num_bits_; }
  std::span<const uint64_t> words() const { return words_; }

  bool bit(uint32_t k) const { return (words_[k >> 6] >> (k & 63)) & 1u; }
  void set_bit(uint32_t k, bool value);

  // Unpacks to a vector of +1.0 / -1.0.
  std::vector<double> ToSigns() const;

  HashCode Complement() const;

  friend bool operator==(const HashCode&, const HashCode&) = default;

 private:
  uint32_t num_bits_ = 0;
  std::vector<uint64_t> words_;
};

constexpr size_t WordsForBits(uint32_t num_bits) {
  return (static_cast<size_t>(num_bits) + 63) / 64;
}

// Mask of the meaningful bits in the last word of a K-bit code.
constexpr uint64_t LastWordMask(uint32_t num_bits) {
  const uint32_t tail = num_bits & 63;
  return tail == 0 ? ~uint64_t{0} : (uint64_t{1} << tail) - 1;
}

// +1 where value >= 0 (zero included), -1 otherwise. K equals values.size().
// Throws kNonFinite on NaN/Inf and kInvalidArgument on an empty vector.
HashCode SignQuantize(std::span<const double> values);

// Hot path: no length checks.
inline uint32_t HammingDistanceWords(const uint64_t* a, const uint64_t* b,
                                     size_t num_words) {
  uint32_t d = 0;
  for (size_t w = 0; w < num_words; ++w) {
    d += static_cast<uint32_t>(std::popcount(a[w] ^ b[w]));
  }
  return d;
}

// Throws kLengthMismatch when the code lengths differ.
uint32_t HammingDistance(const HashCode& a, const HashCode& b);

// Cosine similarity of two +-1 vectors at Hamming distance h: 1 - 2h/K.
double HammingToCosine(uint32_t hamming, uint32_t num_bits);

// Row-major contiguous storage for N codes of identical length.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  explicit CodeMatrix(uint32_t num_bits);

  uint32_t num_bits() const { return num_bits_; }
  size_t words_per_row() const { return words_per_row_; }
  size_t rows() const { return rows_; }
  bool empty() const { return rows_ == 0; }

  const uint64_t* row_data(size_t i) const {
    return data_.data() + i * words_per_row_;
  }
  std::span<const uint64_t> row(size_t i) const {
    return {row_data(i), words_per_row_};
  }

  // Throws kLengthMismatch if code.num_bits() differs.
  void Append(const HashCode& code);
  void AppendWords(std::span<const uint64_t> words);
  void Reserve(size_t rows) { data_.reserve(rows * words_per_row_); }

  HashCode Unpack(size_t i) const;

  friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

 private:
  uint32_t num_bits_ = 0;
  size_t words_per_row_ = 0;
  size_t rows_ = 0;
  std::vector<uint64_t> data_;
};

// Throws kLengthMismatch on mixed code lengths.
CodeMatrix PackCodes(std::span<const HashCode> codes, uint32_t num_bits);

}  // namespace lesion

#endif  // LESION_HASHING_H_
