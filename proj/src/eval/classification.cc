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

#include "lesion/eval/classification.h"

#include <map>
#include <set>

#include "lesion/error.h"
#include "lesion/eval/metrics.h"

namespace lesion::eval {
namespace {

struct Outcomes {
  std::vector<int> labels;
  std::vector<int> predictions;
  std::vector<double> positive_scores;
};

}  // namespace

ClassificationReport EvaluateKnnClassification(const CaseDatabase& db,
                                               const ClassificationConfig& cfg) {
  const CaseStore& store = db.store();
  const uint32_t num_classes = store.label_space.num_classes;
  if (num_classes < 2) {
    throw Error(ErrorCode::kNoLabels, "classification needs a store with >= 2 classes");
  }
  std::map<uint64_t, std::vector<const LesionRecord*>> by_polyp;
  std::set<uint64_t> labeled_polyps;
  for (const auto& r : store.records) {
    by_polyp[r.polyp_id].push_back(&r);
    if (r.label != kUnlabeled) labeled_polyps.insert(r.polyp_id);
  }
  const std::vector<uint64_t> ids(labeled_polyps.begin(), labeled_polyps.end());
  const auto folds = KFoldSplit(ids, cfg.folds, cfg.seed);
  const bool binary = num_classes == 2;
  auto labels_of = [&db](uint64_t id) { return db.LabelOf(id); };

  ClassificationReport report;
  report.k = cfg.k;
  report.num_classes = num_classes;
  Outcomes pooled;
  double auc_sum = 0.0, f1_sum = 0.0;
  size_t auc_count = 0, f1_count = 0;

  for (size_t f = 0; f < folds.size(); ++f) {
    ExcludeSet exclude;
    for (uint64_t polyp : folds[f].test_ids) {
      for (const auto* r : by_polyp[polyp]) exclude.insert(r->record_id);
    }
    Outcomes fold;
    for (uint64_t polyp : folds[f].test_ids) {
      for (const auto* r : by_polyp[polyp]) {
        if (r->label == kUnlabeled) continue;
        const Diagnosis d =
            MajorityVote(db.Search(r->code, cfg.k, &exclude), labels_of, num_classes);
        fold.labels.push_back(r->label);
        fold.predictions.push_back(d.predicted_label);
        fold.positive_scores.push_back(binary ? d.class_scores[1] : 0.0);
      }
    }
    FoldMetrics m;
    m.fold = f;
    m.num_test = fold.labels.size();
    m.accuracy = F1AndAccuracy(fold.predictions, fold.labels).accuracy;
    if (binary) {
      m.f1 = F1AndAccuracy(fold.predictions, fold.labels).f1;
      f1_sum += *m.f1;
      ++f1_count;
      try {
        m.auc = RocAuc(fold.positive_scores, fold.labels);
        auc_sum += *m.auc;
        ++auc_count;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kSingleClass) throw;
      }
    }
    report.mean_accuracy += m.accuracy / static_cast<double>(folds.size());
    report.folds.push_back(m);
    pooled.labels.insert(pooled.labels.end(), fold.labels.begin(), fold.labels.end());
    pooled.predictions.insert(pooled.predictions.end(), fold.predictions.begin(),
                              fold.predictions.end());
    pooled.positive_scores.insert(pooled.positive_scores.end(),
                                  fold.positive_scores.begin(), fold.positive_scores.end());
  }
  if (auc_count > 0) report.mean_auc = auc_sum / static_cast<double>(auc_count);
  if (f1_count > 0) report.mean_f1 = f1_sum / static_cast<double>(f1_count);
  const F1Accuracy overall = F1AndAccuracy(pooled.predictions, pooled.labels);
  report.pooled_accuracy = overall.accuracy;
  if (binary) {
    report.pooled_f1 = overall.f1;
    try {
      report.pooled_auc = RocAuc(pooled.positive_scores, pooled.labels);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingleClass) throw;
    }
  }
  return report;
}

}  // namespace lesion::eval
