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

#include "patcls/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "patcls/errors.hpp"

namespace patcls {
namespace {

std::vector<std::string> tokenize_lower(const std::string& text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{std::string(kMaskToken), std::string(kPadToken)}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.size() < 2 || words_[0] != kMaskToken || words_[1] != kPadToken) {
    throw FormatError("vocabulary must start with <mask> and <pad>");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!ids_.emplace(words_[i], static_cast<std::int32_t>(i)).second) {
      throw FormatError("vocabulary word '" + words_[i] + "' appears twice");
    }
  }
}

std::optional<std::int32_t> Vocabulary::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::int32_t Vocabulary::id(std::string_view word) const { return find(word).value_or(kMask); }

Vocabulary build_vocab(std::span<const std::vector<std::string>> texts, std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& text : texts) {
    for (const auto& w : text) ++counts[w];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [w, c] : counts) {
    if (c >= min_count && w != Vocabulary::kMaskToken && w != Vocabulary::kPadToken) kept.emplace_back(w, c);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> words{std::string(Vocabulary::kMaskToken), std::string(Vocabulary::kPadToken)};
  for (auto& [w, c] : kept) words.push_back(std::move(w));
  return Vocabulary(std::move(words));
}

Vocabulary build_vocab(std::span<const PatentRecord> train, std::size_t min_count) {
  std::vector<std::vector<std::string>> texts;
  texts.reserve(train.size());
  for (const auto& r : train) texts.push_back(r.words);
  return build_vocab(texts, min_count);
}

EncodedText encode_text(std::span<const std::string> words, const Vocabulary& vocab, std::size_t n_max) {
  EncodedText out;
  out.length = std::min(words.size(), n_max);
  out.ids.assign(n_max, Vocabulary::kPad);
  for (std::size_t i = 0; i < out.length; ++i) out.ids[i] = vocab.id(words[i]);
  return out;
}

void encode_records(std::span<PatentRecord> records, const Vocabulary& vocab, std::size_t n_max) {
  for (auto& r : records) {
    EncodedText e = encode_text(r.words, vocab, n_max);
    r.tokens = std::move(e.ids);
    r.valid_len = e.length;
  }
}

std::vector<PatentRecord> parse_corpus(std::istream& in, const Taxonomy& tax, const std::string& source) {
  std::vector<PatentRecord> out;
  std::string line;
  std::size_t lineno = 0;
  const int depth = tax.depth();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": malformed JSON: " + e.what());
    }
    PatentRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.assignee = j.at("assignee").get<std::string>();
      r.time = j.at("time").get<std::int64_t>();
      r.words = tokenize_lower(j.at("text").get<std::string>());
      // Unlabelled records (prediction inputs) carry no "labels" key.
      const auto codes = j.value("labels", std::vector<std::string>{});
      std::vector<std::set<int>> per_level(static_cast<std::size_t>(depth));
      for (const auto& code : codes) {
        auto ref = tax.find(code);
        if (!ref) throw LookupError(where + ": record '" + r.id + "' has unknown code '" + code + "'");
        if (ref->level != depth) {
          throw FormatError(where + ": record '" + r.id + "' label '" + code + "' is not a leaf code");
        }
        int index = ref->index;
        for (int level = depth; level >= 1; --level) {
          per_level[level - 1].insert(index);
          if (level > 1) index = tax.parent(level, index);
        }
      }
      for (auto& s : per_level) r.labels_by_level.emplace_back(s.begin(), s.end());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PatentRecord> load_corpus(const std::filesystem::path& path, const Taxonomy& tax) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open corpus file '" + path.string() + "'");
  return parse_corpus(in, tax, path.string());
}

void write_corpus(const std::filesystem::path& path, std::span<const PatentRecord> records, const Taxonomy& tax) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  const int depth = tax.depth();
  for (const auto& r : records) {
    std::vector<std::string> labels;
    for (int idx : r.labels(depth)) labels.push_back(tax.code(depth, idx));
    nlohmann::json j{{"id", r.id}, {"assignee", r.assignee}, {"time", r.time},
                     {"text", join(r.words)}, {"labels", labels}};
    out << j.dump() << '\n';
  }
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid" || name == "validation") return Split::kValid;
  if (name == "test") return Split::kTest;
  throw ConfigError("unknown split '" + std::string(name) + "' (expected train, valid or test)");
}

CorpusSplit::CorpusSplit(std::vector<PatentRecord> train, std::vector<PatentRecord> valid,
                         std::vector<PatentRecord> test) {
  parts_[0] = std::move(train);
  parts_[1] = std::move(valid);
  parts_[2] = std::move(test);
  std::unordered_set<std::string> ids;
  for (const auto& part : parts_) {
    for (const auto& r : part) {
      if (!ids.insert(r.id).second) throw FormatError("patent id '" + r.id + "' appears in more than one place");
    }
  }
  build_index();
}

void CorpusSplit::build_index() {
  by_assignee_.clear();
  for (int s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < parts_[s].size(); ++i) {
      by_assignee_[parts_[s][i].assignee].push_back({static_cast<Split>(s), i});
    }
  }
  // Stable sort keeps (split, file order) for equal timestamps.
  for (auto& [name, refs] : by_assignee_) {
    std::stable_sort(refs.begin(), refs.end(),
                     [this](const Ref& a, const Ref& b) { return deref(a).time < deref(b).time; });
  }
}

CorpusSplit CorpusSplit::load_dir(const std::filesystem::path& dir, const Taxonomy& tax) {
  auto load_optional = [&](const char* name) {
    const auto p = dir / name;
    return std::filesystem::exists(p) ? load_corpus(p, tax) : std::vector<PatentRecord>{};
  };
  const auto train_path = dir / "train.jsonl";
  if (!std::filesystem::exists(train_path)) {
    throw FormatError("corpus directory '" + dir.string() + "' has no train.jsonl");
  }
  return CorpusSplit(load_corpus(train_path, tax), load_optional("valid.jsonl"), load_optional("test.jsonl"));
}

void CorpusSplit::write_dir(const std::filesystem::path& dir, const Taxonomy& tax) const {
  std::filesystem::create_directories(dir);
  write_corpus(dir / "train.jsonl", parts_[0], tax);
  write_corpus(dir / "valid.jsonl", parts_[1], tax);
  write_corpus(dir / "test.jsonl", parts_[2], tax);
}

const std::vector<PatentRecord>& CorpusSplit::records(Split split) const { return parts_[static_cast<int>(split)]; }

void CorpusSplit::encode(const Vocabulary& vocab, std::size_t n_max) {
  for (auto& part : parts_) encode_records(part, vocab, n_max);
}

std::vector<const PatentRecord*> CorpusSplit::history_of(std::string_view assignee, std::int64_t before,
                                                         std::size_t d_max, HistoryScope scope) const {
  std::vector<const PatentRecord*> out;
  auto it = by_assignee_.find(std::string(assignee));
  if (it == by_assignee_.end() || d_max == 0) return out;
  const auto& refs = it->second;
  // Walk backwards from the newest admissible record.
  auto end = std::lower_bound(refs.begin(), refs.end(), before,
                              [this](const Ref& r, std::int64_t t) { return deref(r).time < t; });
  for (auto r = end; r != refs.begin() && out.size() < d_max;) {
    --r;
    if (scope == HistoryScope::kTrainOnly && r->split != Split::kTrain) continue;
    out.push_back(&deref(*r));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

PretrainedVectors read_pretrained_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open vector file '" + path.string() + "'");
  PretrainedVectors pv;
  std::size_t count = 0;
  std::string header;
  std::getline(in, header);
  {
    std::istringstream hs(header);
    if (!(hs >> count >> pv.dim) || pv.dim == 0) {
      throw FormatError(path.string() + ":1: expected header 'count dim'");
    }
  }
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::vector<float> v(pv.dim);
    for (auto& x : v) {
      if (!(ls >> x)) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(pv.dim) + " values for '" + word + "'");
      }
    }
    pv.vectors[word] = std::move(v);
  }
  if (pv.vectors.size() != count) {
    throw FormatError(path.string() + ": header announces " + std::to_string(count) + " vectors, found " +
                      std::to_string(pv.vectors.size()));
  }
  return pv;
}

}  // namespace patcls
