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
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "patcls/taxonomy.hpp"

namespace patcls {

// One patent: text, assignee, ordinal timestamp and its codes at every
// taxonomy level (closed upward under the parent relation).
struct PatentRecord {
  std::string id;
  std::string assignee;
  std::int64_t time = 0;
  std::vector<std::string> words;
  // Filled by encode_records: exactly n_max ids, PAD beyond valid_len.
  std::vector<std::int32_t> tokens;
  std::size_t valid_len = 0;
  // labels_by_level[l - 1]: sorted code indices at level l.
  std::vector<std::vector<int>> labels_by_level;

  const std::vector<int>& labels(int level) const { return labels_by_level.at(level - 1); }
};

class Vocabulary {
 public:
  static constexpr std::int32_t kMask = 0;
  static constexpr std::int32_t kPad = 1;
  static constexpr std::string_view kMaskToken = "<mask>";
  static constexpr std::string_view kPadToken = "<pad>";

  Vocabulary();
  // words[0] and words[1] must be the MASK and PAD tokens.
  explicit Vocabulary(std::vector<std::string> words);

  std::optional<std::int32_t> find(std::string_view word) const;
  // Unknown words map to MASK.
  std::int32_t id(std::string_view word) const;
  const std::string& word(std::int32_t id) const { return words_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> ids_;
};

// Words occurring at least min_count times across the given texts, in order
// of decreasing count then lexicographically, after MASK and PAD.
Vocabulary build_vocab(std::span<const std::vector<std::string>> texts, std::size_t min_count = 5);
Vocabulary build_vocab(std::span<const PatentRecord> train, std::size_t min_count = 5);

struct EncodedText {
  std::vector<std::int32_t> ids;
  std::size_t length = 0;
};

// First n_max words mapped to ids (unknown -> MASK), padded with PAD to n_max.
EncodedText encode_text(std::span<const std::string> words, const Vocabulary& vocab, std::size_t n_max = 100);
void encode_records(std::span<PatentRecord> records, const Vocabulary& vocab, std::size_t n_max);

// JSON Lines corpus: {"id","assignee","time","text","labels":[leaf codes]}.
std::vector<PatentRecord> parse_corpus(std::istream& in, const Taxonomy& tax,
                                       const std::string& source = "<input>");
std::vector<PatentRecord> load_corpus(const std::filesystem::path& path, const Taxonomy& tax);
void write_corpus(const std::filesystem::path& path, std::span<const PatentRecord> records,
                  const Taxonomy& tax);

enum class Split { kTrain, kValid, kTest };
std::string_view split_name(Split split);
Split parse_split(std::string_view name);

// Which records may serve as history.
enum class HistoryScope { kTrainOnly, kAll };

// Train/validation/test partitions plus a per-assignee time-ordered index
// over all of them. Immutable after construction apart from encode().
class CorpusSplit {
 public:
  CorpusSplit() = default;
  CorpusSplit(std::vector<PatentRecord> train, std::vector<PatentRecord> valid,
              std::vector<PatentRecord> test);

  // Reads train.jsonl, valid.jsonl, test.jsonl from dir (the latter two may
  // be absent).
  static CorpusSplit load_dir(const std::filesystem::path& dir, const Taxonomy& tax);
  void write_dir(const std::filesystem::path& dir, const Taxonomy& tax) const;

  const std::vector<PatentRecord>& records(Split split) const;
  const std::vector<PatentRecord>& train() const { return records(Split::kTrain); }
  const std::vector<PatentRecord>& valid() const { return records(Split::kValid); }
  const std::vector<PatentRecord>& test() const { return records(Split::kTest); }

  void encode(const Vocabulary& vocab, std::size_t n_max);

  // The latest <= d_max records of `assignee` with time strictly before
  // `before`, oldest first. Equal timestamps keep corpus order (train, valid,
  // test, then file order).
  std::vector<const PatentRecord*> history_of(std::string_view assignee, std::int64_t before,
                                              std::size_t d_max,
                                              HistoryScope scope = HistoryScope::kAll) const;

 private:
  struct Ref {
    Split split;
    std::size_t index;
  };
  void build_index();
  const PatentRecord& deref(const Ref& r) const { return parts_[static_cast<int>(r.split)][r.index]; }

  std::vector<PatentRecord> parts_[3];
  std::unordered_map<std::string, std::vector<Ref>> by_assignee_;
};

// Optional pretrained word vectors: header "count dim", then "word v1 .. vdim".
struct PretrainedVectors {
  std::size_t dim = 0;
  std::map<std::string, std::vector<float>> vectors;
};
PretrainedVectors read_pretrained_vectors(const std::filesystem::path& path);

}  // namespace patcls
