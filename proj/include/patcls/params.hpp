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

#include <string>
#include <string_view>
#include <vector>

#include "patcls/rng.hpp"
#include "patcls/tensor.hpp"

namespace patcls {

// Named, ordered collection of trainable tensors. Order is registration
// order and defines checkpoint layout and optimizer state layout.
class ModelParams {
 public:
  struct Entry {
    std::string name;
    Tensor tensor;
  };

  // Registers a parameter drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Tensor add_uniform(std::string name, Shape shape, std::size_t fan_in, Rng& rng);
  // Registers an existing tensor; it is marked as requiring gradients.
  Tensor add(std::string name, Tensor tensor);

  const Tensor& get(std::string_view name) const;
  const Tensor* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::size_t size() const { return entries_.size(); }
  std::size_t total_elements() const;
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void zero_grad() const;

  // Deep copy of all values, and restore from such a copy.
  std::vector<std::vector<float>> snapshot() const;
  void restore(const std::vector<std::vector<float>>& values);

 private:
  std::vector<Entry> entries_;
};

}  // namespace patcls
