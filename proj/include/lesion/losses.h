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

#ifndef LESION_LOSSES_H_
#define LESION_LOSSES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lesion/core_model.h"

namespace lesion {

// Forward implementations of the contrastive, entropy and masked
// reconstruction objectives used to train the embedding encoders, plus their
// analytic gradients with respect to the raw (unnormalized) inputs.

using EmbeddingBatch = std::vector<Vector>;

// Ordered positive pairs over a batch of `batch_size` items.
class PositivePairSet {
 public:
  // Throws kInvalidArgument for out-of-range indices or self pairs. Duplicate
  // pairs are collapsed.
  PositivePairSet(size_t batch_size, std::vector<std::pair<size_t, size_t>> pairs);

  // 2N views where view i and view i + N are augmentations of image i.
  static PositivePairSet ImageLevel(size_t num_images);

  // Every ordered pair of distinct items sharing a group id is positive.
  static PositivePairSet FromGroups(std::span<const uint64_t> group_of);

  size_t batch_size() const { return batch_size_; }
  const std::vector<std::pair<size_t, size_t>>& pairs() const { return pairs_; }
  // Sorted positives of item i (P_i; excludes i).
  const std::vector<size_t>& positives(size_t i) const { return positives_[i]; }
  bool IsPositive(size_t i, size_t j) const;

 private:
  size_t batch_size_ = 0;
  std::vector<std::pair<size_t, size_t>> pairs_;
  std::vector<std::vector<size_t>> positives_;
};

struct ContrastiveConfig {
  double temperature = 0.05;
  // Image-level objective weights.
  double entropy_weight = 1.0;
  double reconstruction_weight = 1.0;
  // Scene-level objective weights.
  double scene_entropy_weight = 1.0;
  double scene_reconstruction_weight = 1.0;
};

// Row-major M x M.
struct SquareMatrix {
  size_t n = 0;
  std::vector<double> data;

  double operator()(size_t i, size_t j) const { return data[i * n + j]; }
  double& operator()(size_t i, size_t j) { return data[i * n + j]; }
};

// s_ij = <z_i/|z_i|, z_j/|z_j|> / tau. Throws kZeroNorm, kNonFinite,
// kDimensionMismatch or kInvalidArgument (tau <= 0, empty batch).
SquareMatrix PairwiseSimilarity(const EmbeddingBatch& batch, double temperature);

// Denominator holds the pair's own positive plus all non-positives of i:
//   l_ij = -log( e^{s_ij} / (e^{s_ij} + sum_{k not in P_i u {i}} e^{s_ik}) )
//   L    = 1/M sum_i 1/|P_i| sum_{j in P_i} l_ij
// Throws kNoPositives if any item lacks a positive partner.
double InfoNceExclusive(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                        double temperature);

// Denominator holds every k != i; averaged over all pairs:
//   L = 1/|P| sum_{(i,j) in P} -log( e^{s_ij} / sum_{k != i} e^{s_ik} )
double InfoNceInclusive(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                        double temperature);

enum class EntropyLevel { kImage, kScene };
enum class DistanceSpace {
  kNormalized,  // distances between L2-normalized embeddings
  kRaw,         // distances between the embeddings as given
};

// L = -1/M sum_i log( min_{j not in P_i u {i}} |z_i - z_j|_2 ). Both levels
// share this form. Throws kNoNegatives ("entropy undefined: no negatives")
// when some item has no non-positive partner.
double EntropyRegularizer(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                          EntropyLevel level = EntropyLevel::kImage,
                          DistanceSpace space = DistanceSpace::kNormalized);

struct MaskedImageBatch {
  std::vector<Vector> originals;
  std::vector<Vector> reconstructions;
  std::vector<std::vector<size_t>> masks;  // masked pixel indices per item
};

// 1/M sum_i 1/|M_i| sum_{k in M_i} (recon_ik - orig_ik)^2. Throws kEmptyMask,
// kDimensionMismatch or kInvalidArgument (index out of range, duplicates).
double MaskedMse(const MaskedImageBatch& batch);

struct LossParts {
  double infonce = 0.0;
  double entropy = 0.0;
  double mse = 0.0;
};

// infonce + entropy_weight * entropy + reconstruction_weight * mse
double TotalImageLoss(const LossParts& parts, const ContrastiveConfig& cfg);
// infonce + scene_entropy_weight * entropy + scene_reconstruction_weight * mse
double TotalSceneLoss(const LossParts& parts, const ContrastiveConfig& cfg);

struct LossGradient {
  double value = 0.0;
  std::vector<Vector> gradient;  // same shape as the differentiated input
};

LossGradient InfoNceExclusiveGradient(const EmbeddingBatch& batch,
                                      const PositivePairSet& pairs, double temperature);
LossGradient InfoNceInclusiveGradient(const EmbeddingBatch& batch,
                                      const PositivePairSet& pairs, double temperature);
// Subgradient at distance ties: the lowest-index nearest negative is used.
LossGradient EntropyRegularizerGradient(const EmbeddingBatch& batch,
                                        const PositivePairSet& pairs,
                                        DistanceSpace space = DistanceSpace::kNormalized);
// Gradient with respect to the reconstructions.
LossGradient MaskedMseGradient(const MaskedImageBatch& batch);

}  // namespace lesion

#endif  // LESION_LOSSES_H_
