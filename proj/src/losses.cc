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

#include "lesion/losses.h"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "lesion/error.h"
#include "lesion/fusion.h"

namespace lesion {

PositivePairSet::PositivePairSet(size_t batch_size,
                                 std::vector<std::pair<size_t, size_t>> pairs)
    : batch_size_(batch_size), positives_(batch_size) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  for (const auto& [i, j] : pairs) {
    if (i >= batch_size || j >= batch_size) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") out of range for batch of " + std::to_string(batch_size));
    }
    if (i == j) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self pair (" + std::to_string(i) + ", " + std::to_string(i) + ")");
    }
    positives_[i].push_back(j);
  }
  pairs_ = std::move(pairs);
}

PositivePairSet PositivePairSet::ImageLevel(size_t num_images) {
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < num_images; ++i) {
    pairs.emplace_back(i, i + num_images);
    pairs.emplace_back(i + num_images, i);
  }
  return PositivePairSet(2 * num_images, std::move(pairs));
}

PositivePairSet PositivePairSet::FromGroups(std::span<const uint64_t> group_of) {
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < group_of.size(); ++i) {
    for (size_t j = 0; j < group_of.size(); ++j) {
      if (i != j && group_of[i] == group_of[j]) pairs.emplace_back(i, j);
    }
  }
  return PositivePairSet(group_of.size(), std::move(pairs));
}

bool PositivePairSet::IsPositive(size_t i, size_t j) const {
  const auto& p = positives_[i];
  return std::binary_search(p.begin(), p.end(), j);
}

namespace {

void CheckBatch(const EmbeddingBatch& batch) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  const size_t dim = batch.front().size();
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, "zero-dimensional batch");
  for (size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "batch item " + std::to_string(i) + " has dimension " +
                      std::to_string(batch[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    for (double x : batch[i]) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNonFinite,
                    "non-finite value in batch item " + std::to_string(i));
      }
    }
  }
}

void CheckPairs(const EmbeddingBatch& batch, const PositivePairSet& pairs) {
  if (pairs.batch_size() != batch.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "pair set covers " + std::to_string(pairs.batch_size()) +
                    " items, batch has " + std::to_string(batch.size()));
  }
}

void CheckTemperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
}

struct Normalized {
  std::vector<Vector> unit;
  std::vector<double> norm;
};

Normalized NormalizeBatch(const EmbeddingBatch& batch) {
  Normalized out;
  out.unit.reserve(batch.size());
  out.norm.reserve(batch.size());
  for (const auto& v : batch) {
    out.unit.push_back(L2Normalize(v));
    out.norm.push_back(L2Norm(v));
  }
  return out;
}

double Dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (size_t d = 0; d < a.size(); ++d) s += a[d] * b[d];
  return s;
}

// Backpropagates d/du through u = z / |z|.
Vector ThroughNormalization(const Vector& grad_unit, const Vector& unit, double norm) {
  const double radial = Dot(grad_unit, unit);
  Vector g(unit.size());
  for (size_t d = 0; d < unit.size(); ++d) {
    g[d] = (grad_unit[d] - unit[d] * radial) / norm;
  }
  return g;
}

// -s_target + log sum_{k in terms} exp(s_k) with the max factored out, so a
// dominant target stays accurate through log1p. Writes softmax weights into
// `weights` (parallel to `terms`) when requested.
double PairLoss(const SquareMatrix& s, size_t i, size_t target,
                const std::vector<size_t>& terms, std::vector<double>* weights) {
  double m = -std::numeric_limits<double>::infinity();
  size_t arg = terms.front();
  for (size_t k : terms) {
    if (s(i, k) > m) {
      m = s(i, k);
      arg = k;
    }
  }
  double rest = 0.0;
  for (size_t k : terms) {
    if (k != arg) rest += std::exp(s(i, k) - m);
  }
  if (weights != nullptr) {
    weights->resize(terms.size());
    const double z = 1.0 + rest;
    for (size_t t = 0; t < terms.size(); ++t) {
      (*weights)[t] = std::exp(s(i, terms[t]) - m) / z;
    }
  }
  return (m - s(i, target)) + std::log1p(rest);
}

enum class Denominator { kExclusive, kInclusive };

LossGradient InfoNce(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                     double temperature, Denominator mode, bool with_gradient) {
  CheckBatch(batch);
  CheckPairs(batch, pairs);
  CheckTemperature(temperature);
  const size_t m = batch.size();
  for (size_t i = 0; i < m; ++i) {
    if (pairs.positives(i).empty()) {
      throw Error(ErrorCode::kNoPositives,
                  "batch item " + std::to_string(i) + " has no positive partner");
    }
  }
  const Normalized z = NormalizeBatch(batch);
  SquareMatrix s{m, std::vector<double>(m * m)};
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) s(i, j) = Dot(z.unit[i], z.unit[j]) / temperature;
  }

  // dL/ds_ik accumulated per ordered (i, k).
  SquareMatrix ds{m, std::vector<double>(with_gradient ? m * m : 0, 0.0)};
  std::vector<double> weights;
  double total = 0.0;
  std::vector<size_t> others;
  std::vector<size_t> terms;
  for (size_t i = 0; i < m; ++i) {
    const auto& pos = pairs.positives(i);
    others.clear();
    for (size_t k = 0; k < m; ++k) {
      if (k == i) continue;
      if (mode == Denominator::kInclusive || !pairs.IsPositive(i, k)) others.push_back(k);
    }
    const double scale = mode == Denominator::kExclusive
                             ? 1.0 / (static_cast<double>(m) * pos.size())
                             : 1.0 / static_cast<double>(pairs.pairs().size());
    for (size_t j : pos) {
      if (mode == Denominator::kExclusive) {
        terms.assign(1, j);
        terms.insert(terms.end(), others.begin(), others.end());
      } else {
        terms = others;
      }
      total += scale * PairLoss(s, i, j, terms, with_gradient ? &weights : nullptr);
      if (with_gradient) {
        for (size_t t = 0; t < terms.size(); ++t) ds(i, terms[t]) += scale * weights[t];
        ds(i, j) -= scale;
      }
    }
  }

  LossGradient out{total, {}};
  if (!with_gradient) return out;
  const size_t dim = batch.front().size();
  std::vector<Vector> grad_unit(m, Vector(dim, 0.0));
  for (size_t i = 0; i < m; ++i) {
    for (size_t k = 0; k < m; ++k) {
      const double g = ds(i, k) / temperature;
      if (g == 0.0) continue;
      for (size_t d = 0; d < dim; ++d) {
        grad_unit[i][d] += g * z.unit[k][d];
        grad_unit[k][d] += g * z.unit[i][d];
      }
    }
  }
  out.gradient.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    out.gradient.push_back(ThroughNormalization(grad_unit[i], z.unit[i], z.norm[i]));
  }
  return out;
}

LossGradient Entropy(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                     DistanceSpace space, bool with_gradient) {
  CheckBatch(batch);
  CheckPairs(batch, pairs);
  const size_t m = batch.size();
  const size_t dim = batch.front().size();
  Normalized z;
  if (space == DistanceSpace::kNormalized) {
    z = NormalizeBatch(batch);
  } else {
    z.unit = batch;
  }
  const auto& u = z.unit;

  auto distance = [&](size_t i, size_t j) {
    double s = 0.0;
    for (size_t d = 0; d < dim; ++d) {
      const double diff = u[i][d] - u[j][d];
      s += diff * diff;
    }
    return std::sqrt(s);
  };

  std::vector<Vector> grad(with_gradient ? m : 0, Vector(dim, 0.0));
  double total = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    size_t arg = m;
    for (size_t j = 0; j < m; ++j) {
      if (j == i || pairs.IsPositive(i, j)) continue;
      const double d = distance(i, j);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    if (arg == m) {
      throw Error(ErrorCode::kNoNegatives,
                  "entropy undefined: no negatives for batch item " + std::to_string(i));
    }
    total -= std::log(best) / static_cast<double>(m);
    if (with_gradient) {
      const double coef = 1.0 / (static_cast<double>(m) * best * best);
      for (size_t d = 0; d < dim; ++d) {
        const double diff = u[i][d] - u[arg][d];
        grad[i][d] -= coef * diff;
        grad[arg][d] += coef * diff;
      }
    }
  }
  LossGradient out{total, {}};
  if (!with_gradient) return out;
  if (space == DistanceSpace::kRaw) {
    out.gradient = std::move(grad);
    return out;
  }
  out.gradient.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    out.gradient.push_back(ThroughNormalization(grad[i], u[i], z.norm[i]));
  }
  return out;
}

void CheckMaskedBatch(const MaskedImageBatch& batch) {
  const size_t m = batch.originals.size();
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "empty image batch");
  if (batch.reconstructions.size() != m || batch.masks.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "originals, reconstructions and masks must have equal length");
  }
  for (size_t i = 0; i < m; ++i) {
    const size_t pixels = batch.originals[i].size();
    if (batch.reconstructions[i].size() != pixels) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "item " + std::to_string(i) + " reconstruction shape mismatch");
    }
    const auto& mask = batch.masks[i];
    if (mask.empty()) {
      throw Error(ErrorCode::kEmptyMask, "item " + std::to_string(i) + " has an empty mask");
    }
    std::vector<size_t> sorted = mask;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item " + std::to_string(i) + " mask has duplicate indices");
    }
    if (sorted.back() >= pixels) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item " + std::to_string(i) + " mask index out of range");
    }
  }
}

}  // namespace

SquareMatrix PairwiseSimilarity(const EmbeddingBatch& batch, double temperature) {
  CheckBatch(batch);
  CheckTemperature(temperature);
  const Normalized z = NormalizeBatch(batch);
  const size_t m = batch.size();
  SquareMatrix s{m, std::vector<double>(m * m)};
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i; j < m; ++j) {
      s(i, j) = s(j, i) = Dot(z.unit[i], z.unit[j]) / temperature;
    }
  }
  return s;
}

double InfoNceExclusive(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                        double temperature) {
  return InfoNce(batch, pairs, temperature, Denominator::kExclusive, false).value;
}

double InfoNceInclusive(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                        double temperature) {
  return InfoNce(batch, pairs, temperature, Denominator::kInclusive, false).value;
}

LossGradient InfoNceExclusiveGradient(const EmbeddingBatch& batch,
                                      const PositivePairSet& pairs, double temperature) {
  return InfoNce(batch, pairs, temperature, Denominator::kExclusive, true);
}

LossGradient InfoNceInclusiveGradient(const EmbeddingBatch& batch,
                                      const PositivePairSet& pairs, double temperature) {
  return InfoNce(batch, pairs, temperature, Denominator::kInclusive, true);
}

double EntropyRegularizer(const EmbeddingBatch& batch, const PositivePairSet& pairs,
                          EntropyLevel /*level*/, DistanceSpace space) {
  return Entropy(batch, pairs, space, false).value;
}

LossGradient EntropyRegularizerGradient(const EmbeddingBatch& batch,
                                        const PositivePairSet& pairs,
                                        DistanceSpace space) {
  return Entropy(batch, pairs, space, true);
}

double MaskedMse(const MaskedImageBatch& batch) {
  return MaskedMseGradient(batch).value;
}

LossGradient MaskedMseGradient(const MaskedImageBatch& batch) {
  CheckMaskedBatch(batch);
  const size_t m = batch.originals.size();
  LossGradient out;
  out.gradient.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    const auto& orig = batch.originals[i];
    const auto& recon = batch.reconstructions[i];
    const auto& mask = batch.masks[i];
    Vector g(orig.size(), 0.0);
    double item = 0.0;
    for (size_t k : mask) {
      const double diff = recon[k] - orig[k];
      item += diff * diff;
      g[k] = 2.0 * diff / (static_cast<double>(m) * mask.size());
    }
    out.value += item / static_cast<double>(mask.size());
    out.gradient.push_back(std::move(g));
  }
  out.value /= static_cast<double>(m);
  return out;
}

namespace {

void CheckWeights(std::initializer_list<double> weights) {
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, "loss weights must be finite and >= 0");
    }
  }
}

}  // namespace

double TotalImageLoss(const LossParts& parts, const ContrastiveConfig& cfg) {
  CheckWeights({cfg.entropy_weight, cfg.reconstruction_weight});
  return parts.infonce + cfg.entropy_weight * parts.entropy +
         cfg.reconstruction_weight * parts.mse;
}

double TotalSceneLoss(const LossParts& parts, const ContrastiveConfig& cfg) {
  CheckWeights({cfg.scene_entropy_weight, cfg.scene_reconstruction_weight});
  return parts.infonce + cfg.scene_entropy_weight * parts.entropy +
         cfg.scene_reconstruction_weight * parts.mse;
}

}  // namespace lesion
