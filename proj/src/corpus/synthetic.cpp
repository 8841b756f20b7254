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

#include "patcls/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "patcls/errors.hpp"
#include "patcls/rng.hpp"

namespace patcls {
namespace {

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("synth spec key '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("synth spec key '" + key + "' expects a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("synth spec key '" + key + "' expects a boolean, got '" + v + "'");
}

// Level-1 codes are letters (A, B, ...), deeper levels append a two-digit
// index to the parent code.
std::string code_name(const std::string& parent, int level, int child_index) {
  if (level == 1) {
    std::string s;
    int i = child_index;
    do {
      s.insert(s.begin(), static_cast<char>('A' + i % 26));
      i = i / 26 - 1;
    } while (i >= 0);
    return s;
  }
  std::ostringstream os;
  os << parent;
  os.width(2);
  os.fill('0');
  os << child_index;
  return os.str();
}

}  // namespace

SynthSpec SynthSpec::from_key_values(const KeyValues& kv) {
  SynthSpec s;
  for (const auto& [key, value] : kv) {
    if (key == "branching") {
      s.branching.clear();
      std::stringstream ss(value);
      std::string part;
      while (std::getline(ss, part, ',')) s.branching.push_back(static_cast<int>(to_size(key, part)));
    } else if (key == "vocab_size") {
      s.vocab_size = to_size(key, value);
    } else if (key == "words_per_patent") {
      s.words_per_patent = to_size(key, value);
    } else if (key == "words_per_code") {
      s.words_per_code = to_size(key, value);
    } else if (key == "assignees") {
      s.assignees = to_size(key, value);
    } else if (key == "patents_per_assignee") {
      s.patents_per_assignee = to_size(key, value);
    } else if (key == "preferred_codes") {
      s.preferred_codes = to_size(key, value);
    } else if (key == "max_codes") {
      s.max_codes = to_size(key, value);
    } else if (key == "rho") {
      s.rho = to_double(key, value);
    } else if (key == "tau") {
      s.tau = to_double(key, value);
    } else if (key == "sibling_clustered") {
      s.sibling_clustered = to_bool(key, value);
    } else if (key == "parent_word_share") {
      s.parent_word_share = to_double(key, value);
    } else if (key == "train_fraction") {
      s.train_fraction = to_double(key, value);
    } else if (key == "valid_fraction") {
      s.valid_fraction = to_double(key, value);
    } else {
      throw ConfigError("unknown synth spec key '" + key + "'");
    }
  }
  s.validate();
  return s;
}

SynthSpec SynthSpec::load(const std::filesystem::path& path) { return from_key_values(read_key_values(path)); }

void SynthSpec::validate() const {
  if (branching.empty()) throw ConfigError("branching must list at least one level");
  for (int b : branching) {
    if (b < 1) throw ConfigError("branching factors must be positive");
  }
  if (vocab_size < 1 || words_per_patent < 1 || words_per_code < 1) {
    throw ConfigError("vocab_size, words_per_patent and words_per_code must be positive");
  }
  if (assignees < 1 || patents_per_assignee < 1) throw ConfigError("need at least one assignee and patent");
  if (preferred_codes < 1 || max_codes < 1) throw ConfigError("preferred_codes and max_codes must be positive");
  if (rho < 0 || rho > 1 || tau < 0 || tau > 1 || parent_word_share < 0 || parent_word_share > 1) {
    throw ConfigError("rho, tau and parent_word_share must lie in [0,1]");
  }
  if (train_fraction <= 0 || valid_fraction < 0 || train_fraction + valid_fraction > 1) {
    throw ConfigError("split fractions must satisfy 0 < train, 0 <= valid, train + valid <= 1");
  }
  if (sibling_clustered && branching.size() < 2) {
    throw ConfigError("sibling_clustered needs a taxonomy of at least two levels");
  }
  if (parent_word_share > 0 && branching.size() < 2) {
    throw ConfigError("parent_word_share needs a taxonomy of at least two levels");
  }
}

SyntheticCorpus generate_synthetic(const SynthSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);

  // Taxonomy.
  std::vector<std::vector<std::string>> levels(spec.branching.size());
  std::map<std::string, std::string> parent;
  for (int i = 0; i < spec.branching[0]; ++i) levels[0].push_back(code_name("", 1, i));
  for (std::size_t l = 1; l < spec.branching.size(); ++l) {
    for (const auto& p : levels[l - 1]) {
      for (int c = 0; c < spec.branching[l]; ++c) {
        std::string name = code_name(p, static_cast<int>(l + 1), c);
        parent[name] = p;
        levels[l].push_back(std::move(name));
      }
    }
  }
  Taxonomy tax(levels, parent);
  const int depth = tax.depth();
  const std::size_t n_leaves = tax.size(depth);

  // Topic words: a permutation of the vocabulary dealt out in blocks, wrapping
  // around when codes outnumber it.
  std::vector<std::string> vocab(spec.vocab_size);
  for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i] = "w" + std::to_string(i);
  std::vector<std::size_t> perm(spec.vocab_size);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(perm);
  std::size_t cursor = 0;
  auto deal = [&]() {
    std::vector<std::size_t> words(spec.words_per_code);
    for (auto& w : words) w = perm[cursor++ % perm.size()];
    return words;
  };
  std::vector<std::vector<std::size_t>> leaf_words(n_leaves);
  for (auto& w : leaf_words) w = deal();
  std::vector<std::vector<std::size_t>> parent_words;
  if (spec.parent_word_share > 0) {
    parent_words.resize(tax.size(depth - 1));
    for (auto& w : parent_words) w = deal();
  }

  auto siblings_of = [&](int leaf) {
    if (depth == 1) {
      std::vector<int> all(n_leaves);
      for (std::size_t i = 0; i < n_leaves; ++i) all[i] = static_cast<int>(i);
      return all;
    }
    return tax.children(depth - 1, tax.parent(depth, leaf));
  };

  auto draw_codes = [&](const std::vector<int>& preferred) {
    const std::size_t k = 1 + rng.index(spec.max_codes);
    std::set<int> codes;
    if (spec.sibling_clustered) {
      const int anchor = preferred[rng.index(preferred.size())];
      codes.insert(anchor);
      std::vector<int> sib = siblings_of(anchor);
      rng.shuffle(sib);
      for (int s : sib) {
        if (codes.size() >= k) break;
        codes.insert(s);
      }
    } else {
      std::vector<int> pool = preferred;
      rng.shuffle(pool);
      for (std::size_t i = 0; i < std::min(k, pool.size()); ++i) codes.insert(pool[i]);
    }
    return std::vector<int>(codes.begin(), codes.end());
  };

  auto draw_word = [&](const std::vector<int>& codes) -> std::size_t {
    if (!codes.empty() && rng.bernoulli(spec.tau)) {
      const int code = codes[rng.index(codes.size())];
      if (!parent_words.empty() && rng.bernoulli(spec.parent_word_share)) {
        const auto& pool = parent_words[tax.parent(depth, code)];
        return pool[rng.index(pool.size())];
      }
      const auto& pool = leaf_words[code];
      return pool[rng.index(pool.size())];
    }
    return rng.index(spec.vocab_size);
  };

  const std::size_t n_train = std::max<std::size_t>(
      1, static_cast<std::size_t>(spec.train_fraction * static_cast<double>(spec.patents_per_assignee) + 1e-9));
  const std::size_t n_valid =
      static_cast<std::size_t>(spec.valid_fraction * static_cast<double>(spec.patents_per_assignee) + 1e-9);

  std::vector<PatentRecord> parts[3];
  for (std::size_t a = 0; a < spec.assignees; ++a) {
    std::vector<int> preferred;
    if (spec.sibling_clustered) {
      // A preferred sibling group: one parent's children.
      const int leaf = static_cast<int>(rng.index(n_leaves));
      preferred = siblings_of(leaf);
      rng.shuffle(preferred);
      preferred.resize(std::min(preferred.size(), spec.preferred_codes));
    } else {
      std::vector<int> all(n_leaves);
      for (std::size_t i = 0; i < n_leaves; ++i) all[i] = static_cast<int>(i);
      rng.shuffle(all);
      preferred.assign(all.begin(), all.begin() + static_cast<long>(std::min(spec.preferred_codes, n_leaves)));
      std::sort(preferred.begin(), preferred.end());
    }

    std::vector<int> previous;
    for (std::size_t p = 0; p < spec.patents_per_assignee; ++p) {
      std::vector<int> codes;
      if (!previous.empty() && rng.bernoulli(spec.rho)) {
        codes = previous;
      } else {
        codes = draw_codes(preferred);
      }
      previous = codes;

      PatentRecord r;
      r.id = "a" + std::to_string(a) + "-p" + std::to_string(p);
      r.assignee = "assignee" + std::to_string(a);
      r.time = static_cast<std::int64_t>(p);
      r.words.reserve(spec.words_per_patent);
      for (std::size_t w = 0; w < spec.words_per_patent; ++w) r.words.push_back(vocab[draw_word(codes)]);
      std::vector<std::set<int>> per_level(static_cast<std::size_t>(depth));
      for (int leaf : codes) {
        int index = leaf;
        for (int level = depth; level >= 1; --level) {
          per_level[level - 1].insert(index);
          if (level > 1) index = tax.parent(level, index);
        }
      }
      for (auto& s : per_level) r.labels_by_level.emplace_back(s.begin(), s.end());

      const int part = p < n_train ? 0 : (p < n_train + n_valid ? 1 : 2);
      parts[part].push_back(std::move(r));
    }
  }
  return {std::move(tax), CorpusSplit(std::move(parts[0]), std::move(parts[1]), std::move(parts[2]))};
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticCorpus& corpus) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "taxonomy.json", std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write taxonomy into '" + dir.string() + "'");
  out << corpus.taxonomy.to_json().dump(1) << '\n';
  corpus.split.write_dir(dir, corpus.taxonomy);
}

}  // namespace patcls
