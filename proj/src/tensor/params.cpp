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

#include "patcls/params.hpp"

#include <algorithm>
#include <cmath>

#include "patcls/errors.hpp"

namespace patcls {

Tensor ModelParams::add_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
  std::vector<float> values(numel(shape));
  for (float& v : values) v = static_cast<float>(rng.uniform(-bound, bound));
  return add(std::move(name), Tensor(std::move(shape), std::move(values), true));
}

Tensor ModelParams::add(std::string name, Tensor tensor) {
  if (find(name)) throw ContractError("duplicate parameter name '" + name + "'");
  tensor.node()->requires_grad = true;
  entries_.push_back({std::move(name), tensor});
  return tensor;
}

const Tensor& ModelParams::get(std::string_view name) const {
  if (const Tensor* t = find(name)) return *t;
  throw LookupError("no parameter named '" + std::string(name) + "'");
}

const Tensor* ModelParams::find(std::string_view name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return &e.tensor;
  }
  return nullptr;
}

std::size_t ModelParams::total_elements() const {
  std::size_t n = 0;
  for (const Entry& e : entries_) n += e.tensor.numel();
  return n;
}

void ModelParams::zero_grad() const {
  for (const Entry& e : entries_) e.tensor.zero_grad();
}

std::vector<std::vector<float>> ModelParams::snapshot() const {
  std::vector<std::vector<float>> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.emplace_back(e.tensor.values().begin(), e.tensor.values().end());
  return out;
}

void ModelParams::restore(const std::vector<std::vector<float>>& values) {
  if (values.size() != entries_.size()) throw ContractError("snapshot does not match parameter count");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto dst = entries_[i].tensor.values();
    if (values[i].size() != dst.size()) {
      throw ContractError("snapshot size mismatch for '" + entries_[i].name + "'");
    }
    std::copy(values[i].begin(), values[i].end(), dst.begin());
  }
}

}  // namespace patcls
