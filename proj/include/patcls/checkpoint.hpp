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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "patcls/params.hpp"

namespace patcls {

// On-disk layout: one line of JSON manifest terminated by '\n', then the raw
// little-endian f32 payload. The manifest lists {name, shape, offset} per
// tensor (offset in bytes from the payload start), the payload size, an
// FNV-1a 64-bit checksum of the payload, and caller metadata.
struct CheckpointTensor {
  std::string name;
  Shape shape;
  std::vector<float> values;
};

struct CheckpointFile {
  nlohmann::json metadata;
  std::vector<CheckpointTensor> tensors;

  const CheckpointTensor* find(const std::string& name) const;
};

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

void write_checkpoint(const std::filesystem::path& path, const nlohmann::json& metadata,
                      const ModelParams& params);
CheckpointFile read_checkpoint(const std::filesystem::path& path);

// Copies checkpoint values into params. Every parameter must be present with
// the same shape; the error lists all missing names or the first mismatched
// shape. Extra tensors in the file are rejected too.
void load_into(const CheckpointFile& file, const ModelParams& params);

}  // namespace patcls
