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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "patcls/code_correlation.hpp"
#include "patcls/key_values.hpp"
#include "patcls/predictor.hpp"

namespace patcls {

// Field names double as config-file keys.
struct ModelConfig {
  std::size_t T = 32;  // word embedding width
  std::size_t F = 16;  // LSTM hidden width per direction
  std::size_t N = 100; // words kept per patent
  std::size_t D = 10;  // history length
  std::size_t s = 4;   // graph sliding window
  std::size_t I = 2;   // GCN layers
  int level = 3;
  std::size_t batch_size = 32;
  double lr = 2e-3;
  double dropout = 0.5;
  std::size_t max_epochs = 300;
  std::size_t patience = 10;
  std::uint64_t seed = 1;
  IclMode icl_mode = IclMode::kAdaptiveHV;
  bool history = true;
  bool use_pe = true;
  bool use_text = true;
  bool use_label = true;
  LossReduction loss_reduction = LossReduction::kSum;
  std::size_t min_count = 5;
  // Whether a code belongs to its own horizontal neighbor set.
  bool horizontal_self = true;
  std::size_t workers = 1;

  // Sets one field from its textual value; unknown keys and malformed
  // values are ConfigErrors.
  void set(std::string_view key, std::string_view value);
  void apply(const KeyValues& kv);

  static ModelConfig from_key_values(const KeyValues& kv);
  static ModelConfig load(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);

  // Throws ConfigError naming the first bad field.
  void validate(int taxonomy_depth) const;
};

bool parse_bool(std::string_view value);

}  // namespace patcls
