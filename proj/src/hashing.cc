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

#include "lesion/hashing.h"

#include <cmath>
#include <string>

#include "lesion/error.h"

namespace lesion {

HashCode::HashCode(uint32_t num_bits)
    : num_bits_(num_bits), words_(WordsForBits(num_bits), 0) {}

HashCode HashCode::FromWords(uint32_t num_bits, std::vector<uint64_t> words) {
  if (words.size() != WordsForBits(num_bits)) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected " + std::to_string(WordsForBits(num_bits)) +
                    " words for " + std::to_string(num_bits) + " bits, got " +
                    std::to_string(words.size()));
  }
  if (!words.empty() && (words.back() & ~LastWordMask(num_bits)) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "hash code has nonzero pad bits");
  }
  HashCode code;
  code.num_bits_ = num_bits;
  code.words_ = std::move(words);
  return code;
}

void HashCode::set_bit(uint32_t k, bool value) {
  const uint64_t mask = uint64_t{1} << (k & 63);
  if (value) {
    words_[k >> 6] |= mask;
  } else {
    words_[k >> 6] &= ~mask;
  }
}

std::vector<double> HashCode::ToSigns() const {
  std::vector<double> out(num_bits_);
  for (uint32_t k = 0; k < num_bits_; ++k) out[k] = bit(k) ? 1.0 : -1.0;
  return out;
}

HashCode HashCode::Complement() const {
  HashCode out = *this;
  for (auto& w : out.words_) w = ~w;
  if (!out.words_.empty()) out.words_.back() &= LastWordMask(num_bits_);
  return out;
}

HashCode SignQuantize(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot quantize empty embedding");
  }
  HashCode code(static_cast<uint32_t>(values.size()));
  for (size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite,
                  "non-finite embedding at component " + std::to_string(k));
    }
    if (v >= 0.0) code.set_bit(static_cast<uint32_t>(k), true);
  }
  return code;
}

uint32_t HammingDistance(const HashCode& a, const HashCode& b) {
  if (a.num_bits() != b.num_bits()) {
    throw Error(ErrorCode::kLengthMismatch,
                "hash length mismatch: " + std::to_string(a.num_bits()) +
                    " vs " + std::to_string(b.num_bits()));
  }
  return HammingDistanceWords(a.words().data(), b.words().data(),
                              a.words().size());
}

double HammingToCosine(uint32_t hamming, uint32_t num_bits) {
  if (num_bits == 0 || hamming > num_bits) {
    throw Error(ErrorCode::kInvalidArgument,
                "hamming distance " + std::to_string(hamming) +
                    " out of range for K=" + std::to_string(num_bits));
  }
  return 1.0 - 2.0 * static_cast<double>(hamming) / num_bits;
}

CodeMatrix::CodeMatrix(uint32_t num_bits)
    : num_bits_(num_bits), words_per_row_(WordsForBits(num_bits)) {}

void CodeMatrix::Append(const HashCode& code) {
  if (code.num_bits() != num_bits_) {
    throw Error(ErrorCode::kLengthMismatch,
                "cannot pack " + std::to_string(code.num_bits()) +
                    "-bit code into " + std::to_string(num_bits_) +
                    "-bit matrix");
  }
  AppendWords(code.words());
}

void CodeMatrix::AppendWords(std::span<const uint64_t> words) {
  data_.insert(data_.end(), words.begin(), words.end());
  ++rows_;
}

HashCode CodeMatrix::Unpack(size_t i) const {
  auto r = row(i);
  return HashCode::FromWords(num_bits_, {r.begin(), r.end()});
}

CodeMatrix PackCodes(std::span<const HashCode> codes, uint32_t num_bits) {
  CodeMatrix matrix(num_bits);
  matrix.Reserve(codes.size());
  for (const auto& c : codes) matrix.Append(c);
  return matrix;
}

}  // namespace lesion
