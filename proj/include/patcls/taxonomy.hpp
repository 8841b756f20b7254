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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace patcls {

// Position of a code: level is 1-based (1 = section), index is the code's
// row within that level.
struct CodeRef {
  int level = 0;
  int index = 0;
  bool operator==(const CodeRef&) const = default;
  auto operator<=>(const CodeRef&) const = default;
};

// Levels of code identifiers plus the child -> parent belongingness between
// adjacent levels. Immutable once constructed.
class Taxonomy {
 public:
  Taxonomy() = default;
  // Validates that codes are unique, every code below level 1 has exactly one
  // parent one level up, and level-1 codes have none.
  Taxonomy(std::vector<std::vector<std::string>> levels, const std::map<std::string, std::string>& parent);

  static Taxonomy from_json(const nlohmann::json& j);
  static Taxonomy load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  int depth() const { return static_cast<int>(levels_.size()); }
  std::size_t size(int level) const { return levels_.at(level - 1).size(); }
  const std::vector<std::string>& codes(int level) const { return levels_.at(level - 1); }
  const std::string& code(int level, int index) const { return levels_.at(level - 1).at(index); }

  std::optional<CodeRef> find(std::string_view code) const;
  // Throws LookupError for unknown codes.
  CodeRef lookup(std::string_view code) const;

  // Parent index one level up, or -1 at level 1.
  int parent(int level, int index) const { return parents_.at(level - 1).at(index); }
  const std::vector<int>& children(int level, int index) const { return children_.at(level - 1).at(index); }
  // Ancestor index at `ancestor_level` (< level) for the given code.
  int ancestor(int level, int index, int ancestor_level) const;

 private:
  std::vector<std::vector<std::string>> levels_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<std::vector<int>>> children_;
  std::unordered_map<std::string, CodeRef> index_;
};

struct NeighborSets {
  std::vector<CodeRef> horizontal;
  std::vector<CodeRef> vertical;
};

// Horizontal: codes sharing this code's parent (all of level 1 for level-1
// codes), optionally including the code itself. Vertical: the parent one
// level up plus the children one level down, whichever exist.
NeighborSets neighbor_sets(const Taxonomy& tax, int level, int index, bool include_self = true);
NeighborSets neighbor_sets(const Taxonomy& tax, std::string_view code, bool include_self = true);

}  // namespace patcls
