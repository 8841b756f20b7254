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

#include "support.hpp"

#include <map>
#include <set>

namespace patcls::testing {

Taxonomy mini_taxonomy() {
  std::vector<std::vector<std::string>> levels{{"A", "B"}, {"A1", "A2", "B1", "B2"}, {}};
  std::map<std::string, std::string> parent{{"A1", "A"}, {"A2", "A"}, {"B1", "B"}, {"B2", "B"}};
  for (const auto& p : levels[1]) {
    for (const char* suffix : {"a", "b"}) {
      levels[2].push_back(p + suffix);
      parent[p + suffix] = p;
    }
  }
  return Taxonomy(levels, parent);
}

Taxonomy only_child_taxonomy() {
  std::vector<std::vector<std::string>> levels{{"X", "Y"}, {"X1", "Y1", "Y2"}, {"X1a", "Y1a", "Y1b", "Y2a"}};
  std::map<std::string, std::string> parent{{"X1", "X"},  {"Y1", "Y"},  {"Y2", "Y"},
                                            {"X1a", "X1"}, {"Y1a", "Y1"}, {"Y1b", "Y1"}, {"Y2a", "Y2"}};
  return Taxonomy(levels, parent);
}

PatentRecord make_record(const std::string& id, const std::string& assignee, std::int64_t time,
                         std::vector<std::int32_t> tokens, std::size_t n_max, const std::vector<int>& leaf_labels,
                         const Taxonomy& tax) {
  PatentRecord r;
  r.id = id;
  r.assignee = assignee;
  r.time = time;
  for (auto t : tokens) r.words.push_back("t" + std::to_string(t));
  r.valid_len = std::min(tokens.size(), n_max);
  tokens.resize(n_max, Vocabulary::kPad);
  r.tokens = std::move(tokens);
  const int depth = tax.depth();
  std::vector<std::set<int>> per_level(static_cast<std::size_t>(depth));
  for (int leaf : leaf_labels) {
    int idx = leaf;
    for (int l = depth; l >= 1; --l) {
      per_level[static_cast<std::size_t>(l - 1)].insert(idx);
      if (l > 1) idx = tax.parent(l, idx);
    }
  }
  for (auto& s : per_level) r.labels_by_level.emplace_back(s.begin(), s.end());
  return r;
}

ModelConfig mini_config() {
  ModelConfig c;
  c.T = 4;
  c.F = 3;
  c.N = 5;
  c.D = 4;
  c.s = 2;
  c.I = 2;
  c.level = 3;
  c.dropout = 0.0;
  c.batch_size = 4;
  c.seed = 2;
  return c;
}

CorpusSplit mini_corpus(const Taxonomy& tax, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n_max = 5;
  const std::size_t leaves = tax.size(tax.depth());
  std::vector<PatentRecord> train, valid, test;
  const std::size_t per_assignee[] = {6, 2, 1};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t p = 0; p < per_assignee[a]; ++p) {
      const std::size_t len = 1 + rng.index(n_max);
      std::vector<std::int32_t> tokens;
      for (std::size_t i = 0; i < len; ++i) {
        // Ids 2..19 plus the occasional MASK; PAD only as padding.
        const auto id = static_cast<std::int32_t>(rng.index(19));
        tokens.push_back(id == 1 ? 0 : id);
      }
      std::vector<int> labels{static_cast<int>(rng.index(leaves))};
      if (rng.bernoulli(0.5)) labels.push_back(static_cast<int>(rng.index(leaves)));
      auto rec = make_record("a" + std::to_string(a) + "p" + std::to_string(p), "asg" + std::to_string(a),
                             static_cast<std::int64_t>(p), tokens, n_max, labels, tax);
      (p + 1 == per_assignee[a] && a == 0 ? test : train).push_back(std::move(rec));
    }
  }
  valid.push_back(make_record("v0", "asg1", 7, {3, 4, 5}, n_max, {2}, tax));
  return CorpusSplit(std::move(train), std::move(valid), std::move(test));
}

std::vector<float> random_values(std::size_t n, Rng& rng, double lo, double hi) {
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(rng.uniform(lo, hi));
  return v;
}

Tensor random_tensor(Shape shape, Rng& rng, bool requires_grad, double lo, double hi) {
  const std::size_t n = numel(shape);
  return Tensor(std::move(shape), random_values(n, rng, lo, hi), requires_grad);
}

}  // namespace patcls::testing
