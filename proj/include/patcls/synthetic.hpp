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
#include <filesystem>
#include <vector>

#include "patcls/corpus.hpp"
#include "patcls/key_values.hpp"
#include "patcls/taxonomy.hpp"

namespace patcls {

// Planted-structure corpus parameters. Each leaf code owns a topic-word
// distribution, each assignee a small set of preferred leaf codes.
struct SynthSpec {
  // Children per node at each level; {4, 3, 3} gives 4 -> 12 -> 36 codes.
  std::vector<int> branching{4, 3, 3};
  std::size_t vocab_size = 400;
  std::size_t words_per_patent = 30;
  // Topic words owned by each leaf (and by each leaf's parent when
  // parent_word_share > 0).
  std::size_t words_per_code = 8;
  std::size_t assignees = 20;
  std::size_t patents_per_assignee = 15;
  std::size_t preferred_codes = 3;
  std::size_t max_codes = 3;
  // Probability that a patent repeats its assignee's previous codes.
  double rho = 0.5;
  // Probability that a word is drawn from the patent's codes rather than
  // uniformly from the vocabulary.
  double tau = 0.9;
  // Codes of one patent share a parent; preferred sets are sibling groups.
  bool sibling_clustered = false;
  // Fraction of a code's topic draws taken from its parent's shared pool.
  double parent_word_share = 0.0;
  // Per-assignee temporal split: the earliest fraction trains, the next
  // validates, the rest tests.
  double train_fraction = 0.7;
  double valid_fraction = 0.1;

  static SynthSpec from_key_values(const KeyValues& kv);
  static SynthSpec load(const std::filesystem::path& path);
  // Throws ConfigError when inconsistent.
  void validate() const;
};

struct SyntheticCorpus {
  Taxonomy taxonomy;
  CorpusSplit split;
};

// Deterministic in (spec, seed).
SyntheticCorpus generate_synthetic(const SynthSpec& spec, std::uint64_t seed);

// Writes taxonomy.json and train/valid/test.jsonl into dir.
void write_synthetic(const std::filesystem::path& dir, const SyntheticCorpus& corpus);

}  // namespace patcls
