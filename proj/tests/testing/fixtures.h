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

#ifndef LESION_TESTS_TESTING_FIXTURES_H_
#define LESION_TESTS_TESTING_FIXTURES_H_

#include <cstdint>
#include <string>

#include "lesion/core_model.h"
#include "lesion/io/embedding_file.h"

namespace lesion::testing {

// Synthetic multi-view polyps as an embedding file (record ids are row
// numbers offset by first_record_id). Values are already f32-exact.
io::EmbeddingFile SyntheticEmbeddingFile(size_t polyps, uint32_t views, uint32_t dim,
                                         uint64_t seed, uint64_t first_polyp_id = 0,
                                         uint64_t first_record_id = 0);

// HTTP request body equivalent to the given polyp's rows of `file`.
std::string QueryBodyForPolyp(const io::EmbeddingFile& file, uint64_t polyp_id,
                              size_t k, const std::string& metric, bool exclude_self);

// The rows of `file` belonging to `polyp_id`, as a standalone file.
io::EmbeddingFile RowsForPolyp(const io::EmbeddingFile& file, uint64_t polyp_id);

}  // namespace lesion::testing

#endif  // LESION_TESTS_TESTING_FIXTURES_H_
