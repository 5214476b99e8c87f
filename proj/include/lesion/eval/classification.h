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

#ifndef LESION_EVAL_CLASSIFICATION_H_
#define LESION_EVAL_CLASSIFICATION_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "lesion/diagnosis.h"

namespace lesion::eval {

struct ClassificationConfig {
  size_t folds = 5;
  uint64_t seed = 0;
  size_t k = kDefaultK;
};

struct FoldMetrics {
  size_t fold = 0;
  size_t num_test = 0;
  double accuracy = 0.0;
  std::optional<double> auc;  // binary stores with both classes in the fold
  std::optional<double> f1;   // binary stores
};

struct ClassificationReport {
  size_t k = 0;
  uint32_t num_classes = 0;
  std::vector<FoldMetrics> folds;
  // Unweighted means over folds; auc/f1 over the folds that report them.
  double mean_accuracy = 0.0;
  std::optional<double> mean_auc;
  std::optional<double> mean_f1;
  // Every labeled polyp is tested exactly once; metrics over the union.
  double pooled_accuracy = 0.0;
  std::optional<double> pooled_auc;
  std::optional<double> pooled_f1;
};

// Leave-fold-out kNN: labeled polyps are split into folds; each test polyp
// is diagnosed against the store with every record of its fold excluded.
// Unlabeled records always remain in the reference set. Throws
// kInvalidArgument when folds exceed the labeled polyp count.
ClassificationReport EvaluateKnnClassification(const CaseDatabase& db,
                                               const ClassificationConfig& cfg);

}  // namespace lesion::eval

#endif  // LESION_EVAL_CLASSIFICATION_H_
