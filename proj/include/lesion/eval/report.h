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

#ifndef LESION_EVAL_REPORT_H_
#define LESION_EVAL_REPORT_H_

#include <span>
#include <string>

#include "json.hpp"

#include "lesion/eval/classification.h"
#include "lesion/eval/reid.h"
#include "lesion/eval/speed.h"

namespace lesion::eval {

// JSON forms use sorted keys; optional fields become null.
nlohmann::json ToJson(const MetricsReport& r);
nlohmann::json ToJson(const ClassificationReport& r);
// Per-query result ids are left out.
nlohmann::json ToJson(const SpeedReport& r);

// Fixed-width text tables for terminals.
std::string FormatReidTable(std::span<const MetricsReport> reports);
std::string FormatClassificationTable(const ClassificationReport& r);
std::string FormatSpeedTable(const SpeedReport& r);

}  // namespace lesion::eval

#endif  // LESION_EVAL_REPORT_H_
