// Copyright 2026 The patcls Authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "patcls/config.hpp"
#include "patcls/corpus.hpp"
#include "patcls/rng.hpp"
#include "patcls/taxonomy.hpp"
#include "patcls/tensor.hpp"

namespace patcls::testing {

// Three levels with 2 / 4 / 8 codes: A B; A1 A2 B1 B2; A1a A1b ... B2b.
Taxonomy mini_taxonomy();

// Taxonomy with a single-child parent: X -> X1 -> X1a, Y -> {Y1, Y2} -> leaves.
Taxonomy only_child_taxonomy();

// Record with explicit token ids padded to n_max, and leaf labels closed
// upward through the taxonomy.
PatentRecord make_record(const std::string& id, const std::string& assignee, std::int64_t time,
                         std::vector<std::int32_t> tokens, std::size_t n_max, const std::vector<int>& leaf_labels,
                         const Taxonomy& tax);

// T=4, F=3, N=5, D=4, s=2, I=2 at level 3, dropout off.
ModelConfig mini_config();

// A few assignees with histories of 0..5 patents over a 20-word vocabulary,
// labelled with random leaves of `tax`.
CorpusSplit mini_corpus(const Taxonomy& tax, std::uint64_t seed);

std::vector<float> random_values(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0);
Tensor random_tensor(Shape shape, Rng& rng, bool requires_grad = true, double lo = -1.0, double hi = 1.0);

}  // namespace patcls::testing
