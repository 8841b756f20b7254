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

#include "patcls/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "patcls/errors.hpp"

namespace patcls {
namespace {

constexpr const char* kFormat = "patcls-checkpoint";
constexpr int kVersion = 1;

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

void append_le(std::vector<std::uint8_t>& out, float value) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

float read_le(const std::uint8_t* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

}  // namespace

const CheckpointTensor* CheckpointFile::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_checkpoint(const std::filesystem::path& path, const nlohmann::json& metadata,
                      const ModelParams& params) {
  std::vector<std::uint8_t> payload;
  payload.reserve(params.total_elements() * 4);
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& e : params) {
    tensors.push_back({{"name", e.name}, {"shape", e.tensor.shape()}, {"offset", payload.size()}});
    for (float v : e.tensor.values()) append_le(payload, v);
  }
  nlohmann::json manifest{{"format", kFormat},
                          {"version", kVersion},
                          {"metadata", metadata},
                          {"tensors", std::move(tensors)},
                          {"payload_bytes", payload.size()},
                          {"checksum", hex64(fnv1a64(payload))}};
  const std::string header = manifest.dump() + "\n";

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open '" + path.string() + "' for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (!out) throw CheckpointError("failed writing checkpoint '" + path.string() + "'");
}

CheckpointFile read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::string header;
  if (!std::getline(in, header)) throw CheckpointError("checkpoint '" + path.string() + "' is empty");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("checkpoint manifest is not valid JSON: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != kFormat || manifest.value("version", 0) != kVersion) {
    throw CheckpointError("'" + path.string() + "' is not a version-1 patcls checkpoint");
  }

  const auto payload_bytes = manifest.at("payload_bytes").get<std::size_t>();
  std::vector<std::uint8_t> payload(payload_bytes);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload_bytes));
  if (static_cast<std::size_t>(in.gcount()) != payload_bytes) {
    throw CheckpointError("checkpoint payload truncated: expected " + std::to_string(payload_bytes) +
                          " bytes, read " + std::to_string(in.gcount()));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw CheckpointError("checkpoint has trailing bytes after the payload");
  }
  if (hex64(fnv1a64(payload)) != manifest.at("checksum").get<std::string>()) {
    throw CheckpointError("checkpoint checksum mismatch: file is corrupted");
  }

  CheckpointFile file;
  file.metadata = manifest.at("metadata");
  for (const auto& entry : manifest.at("tensors")) {
    CheckpointTensor t;
    t.name = entry.at("name").get<std::string>();
    t.shape = entry.at("shape").get<Shape>();
    const auto offset = entry.at("offset").get<std::size_t>();
    const std::size_t count = numel(t.shape);
    if (offset + count * 4 > payload.size()) {
      throw CheckpointError("tensor '" + t.name + "' extends past the payload");
    }
    t.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) t.values[i] = read_le(payload.data() + offset + 4 * i);
    file.tensors.push_back(std::move(t));
  }
  return file;
}

void load_into(const CheckpointFile& file, const ModelParams& params) {
  std::vector<std::string> missing;
  for (const auto& e : params) {
    if (!file.find(e.name)) missing.push_back(e.name);
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "checkpoint is missing " << missing.size() << " tensor(s):";
    for (const auto& n : missing) os << ' ' << n;
    throw CheckpointError(os.str());
  }
  for (const auto& e : params) {
    const CheckpointTensor* t = file.find(e.name);
    if (t->shape != e.tensor.shape()) {
      throw CheckpointError("shape mismatch for '" + e.name + "': checkpoint has " + to_string(t->shape) +
                            ", model expects " + to_string(e.tensor.shape()));
    }
  }
  if (file.tensors.size() != params.size()) {
    for (const auto& t : file.tensors) {
      if (!params.contains(t.name)) throw CheckpointError("checkpoint has unexpected tensor '" + t.name + "'");
    }
  }
  for (const auto& e : params) {
    Tensor dst = e.tensor;
    std::copy(file.find(e.name)->values.begin(), file.find(e.name)->values.end(), dst.values().begin());
  }
}

}  // namespace patcls
