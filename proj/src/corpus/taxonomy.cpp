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

#include "patcls/taxonomy.hpp"

#include <fstream>

#include "patcls/errors.hpp"

namespace patcls {

Taxonomy::Taxonomy(std::vector<std::vector<std::string>> levels,
                   const std::map<std::string, std::string>& parent)
    : levels_(std::move(levels)) {
  if (levels_.empty()) throw FormatError("taxonomy has no levels");
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (levels_[l].empty()) throw FormatError("taxonomy level " + std::to_string(l + 1) + " is empty");
    for (std::size_t i = 0; i < levels_[l].size(); ++i) {
      const CodeRef ref{static_cast<int>(l + 1), static_cast<int>(i)};
      if (!index_.emplace(levels_[l][i], ref).second) {
        throw FormatError("taxonomy code '" + levels_[l][i] + "' appears more than once");
      }
    }
  }
  for (const auto& [child, par] : parent) {
    if (!index_.count(child)) throw FormatError("parent map names unknown code '" + child + "'");
  }

  parents_.resize(levels_.size());
  children_.resize(levels_.size());
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    parents_[l].assign(levels_[l].size(), -1);
    children_[l].resize(levels_[l].size());
  }
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    for (std::size_t i = 0; i < levels_[l].size(); ++i) {
      const std::string& c = levels_[l][i];
      auto it = parent.find(c);
      if (l == 0) {
        if (it != parent.end()) throw FormatError("level-1 code '" + c + "' must not have a parent");
        continue;
      }
      if (it == parent.end()) throw FormatError("code '" + c + "' has no parent");
      auto p = index_.find(it->second);
      if (p == index_.end()) throw FormatError("code '" + c + "' has unknown parent '" + it->second + "'");
      if (p->second.level != static_cast<int>(l)) {
        throw FormatError("parent '" + it->second + "' of '" + c + "' is not one level above it");
      }
      parents_[l][i] = p->second.index;
      children_[l - 1][p->second.index].push_back(static_cast<int>(i));
    }
  }
}

Taxonomy Taxonomy::from_json(const nlohmann::json& j) {
  try {
    auto levels = j.at("levels").get<std::vector<std::vector<std::string>>>();
    std::map<std::string, std::string> parent;
    if (j.contains("parent")) parent = j.at("parent").get<std::map<std::string, std::string>>();
    return Taxonomy(std::move(levels), parent);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed taxonomy JSON: " + std::string(e.what()));
  }
}

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open taxonomy file '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("taxonomy file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

nlohmann::json Taxonomy::to_json() const {
  nlohmann::json parent = nlohmann::json::object();
  for (std::size_t l = 1; l < levels_.size(); ++l) {
    for (std::size_t i = 0; i < levels_[l].size(); ++i) {
      parent[levels_[l][i]] = levels_[l - 1][parents_[l][i]];
    }
  }
  return {{"levels", levels_}, {"parent", parent}};
}

std::optional<CodeRef> Taxonomy::find(std::string_view code) const {
  auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CodeRef Taxonomy::lookup(std::string_view code) const {
  if (auto ref = find(code)) return *ref;
  throw LookupError("unknown taxonomy code '" + std::string(code) + "'");
}

int Taxonomy::ancestor(int level, int index, int ancestor_level) const {
  if (ancestor_level < 1 || ancestor_level > level) {
    throw LookupError("no ancestor level " + std::to_string(ancestor_level) + " above level " +
                      std::to_string(level));
  }
  while (level > ancestor_level) {
    index = parent(level, index);
    if (index < 0) throw FormatError("broken ancestor chain at level " + std::to_string(level));
    --level;
  }
  return index;
}

NeighborSets neighbor_sets(const Taxonomy& tax, int level, int index, bool include_self) {
  if (level < 1 || level > tax.depth() || index < 0 || static_cast<std::size_t>(index) >= tax.size(level)) {
    throw LookupError("no code at level " + std::to_string(level) + " index " + std::to_string(index));
  }
  NeighborSets sets;
  const int par = tax.parent(level, index);
  if (par < 0) {
    for (int i = 0; i < static_cast<int>(tax.size(level)); ++i) {
      if (include_self || i != index) sets.horizontal.push_back({level, i});
    }
  } else {
    for (int sibling : tax.children(level - 1, par)) {
      if (include_self || sibling != index) sets.horizontal.push_back({level, sibling});
    }
    sets.vertical.push_back({level - 1, par});
  }
  if (level < tax.depth()) {
    for (int child : tax.children(level, index)) sets.vertical.push_back({level + 1, child});
  }
  return sets;
}

NeighborSets neighbor_sets(const Taxonomy& tax, std::string_view code, bool include_self) {
  const CodeRef ref = tax.lookup(code);
  return neighbor_sets(tax, ref.level, ref.index, include_self);
}

}  // namespace patcls
