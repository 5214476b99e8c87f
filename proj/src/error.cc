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

#include "lesion/error.h"

namespace lesion {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kZeroNorm: return "zero_norm";
    case ErrorCode::kDegenerateFusion: return "degenerate_fusion";
    case ErrorCode::kEmptyScene: return "empty_scene";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNoLabels: return "no_labels";
    case ErrorCode::kNoLabeledEvidence: return "no_labeled_evidence";
    case ErrorCode::kNoNegatives: return "no_negatives";
    case ErrorCode::kNoPositives: return "no_positives";
    case ErrorCode::kEmptyMask: return "empty_mask";
    case ErrorCode::kEmptyStore: return "empty_store";
    case ErrorCode::kEmptyCandidates: return "empty_candidates";
    case ErrorCode::kInvalidStore: return "invalid_store";
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kBadVersion: return "bad_version";
    case ErrorCode::kUnexpectedEof: return "unexpected_eof";
    case ErrorCode::kTrailingData: return "trailing_data";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kDuplicateView: return "duplicate_view";
    case ErrorCode::kUnknownLabel: return "unknown_label";
    case ErrorCode::kLabelConflict: return "label_conflict";
    case ErrorCode::kNoRecords: return "no_records";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kMissingGroundTruth: return "missing_ground_truth";
    case ErrorCode::kSingleClass: return "single_class";
  }
  return "unknown";
}

}  // namespace lesion
