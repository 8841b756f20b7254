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

#include "patcls/config.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "patcls/errors.hpp"

namespace patcls {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

bool parse_bool(std::string_view value) {
  if (value == "on" || value == "true" || value == "1" || value == "yes") return true;
  if (value == "off" || value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("expected a boolean (on/off/true/false), got '" + std::string(value) + "'");
}

void ModelConfig::set(std::string_view key, std::string_view value) {
  auto size = [&] { return parse_number<std::size_t>(key, value); };
  if (key == "T") T = size();
  else if (key == "F") F = size();
  else if (key == "N") N = size();
  else if (key == "D") D = size();
  else if (key == "s") s = size();
  else if (key == "I") I = size();
  else if (key == "level") level = parse_number<int>(key, value);
  else if (key == "batch_size") batch_size = size();
  else if (key == "lr") lr = parse_number<double>(key, value);
  else if (key == "dropout") dropout = parse_number<double>(key, value);
  else if (key == "max_epochs") max_epochs = size();
  else if (key == "patience") patience = size();
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "icl_mode") icl_mode = parse_icl_mode(value);
  else if (key == "history") history = parse_bool(value);
  else if (key == "use_pe") use_pe = parse_bool(value);
  else if (key == "use_text") use_text = parse_bool(value);
  else if (key == "use_label") use_label = parse_bool(value);
  else if (key == "loss_reduction") loss_reduction = parse_loss_reduction(value);
  else if (key == "min_count") min_count = size();
  else if (key == "horizontal_self") horizontal_self = parse_bool(value);
  else if (key == "workers") workers = size();
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ModelConfig::apply(const KeyValues& kv) {
  for (const auto& [k, v] : kv) set(k, v);
}

ModelConfig ModelConfig::from_key_values(const KeyValues& kv) {
  ModelConfig c;
  c.apply(kv);
  return c;
}

ModelConfig ModelConfig::load(const std::filesystem::path& path) { return from_key_values(read_key_values(path)); }

nlohmann::json ModelConfig::to_json() const {
  // Values as strings so that from_json can reuse set() and doubles round
  // trip exactly.
  nlohmann::ordered_json j;
  auto b = [](bool v) { return std::string(v ? "on" : "off"); };
  j["T"] = std::to_string(T);
  j["F"] = std::to_string(F);
  j["N"] = std::to_string(N);
  j["D"] = std::to_string(D);
  j["s"] = std::to_string(s);
  j["I"] = std::to_string(I);
  j["level"] = std::to_string(level);
  j["batch_size"] = std::to_string(batch_size);
  j["lr"] = format_double(lr);
  j["dropout"] = format_double(dropout);
  j["max_epochs"] = std::to_string(max_epochs);
  j["patience"] = std::to_string(patience);
  j["seed"] = std::to_string(seed);
  j["icl_mode"] = std::string(icl_mode_name(icl_mode));
  j["history"] = b(history);
  j["use_pe"] = b(use_pe);
  j["use_text"] = b(use_text);
  j["use_label"] = b(use_label);
  j["loss_reduction"] = std::string(loss_reduction_name(loss_reduction));
  j["min_count"] = std::to_string(min_count);
  j["horizontal_self"] = b(horizontal_self);
  j["workers"] = std::to_string(workers);
  return nlohmann::json::parse(j.dump());
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("model config must be a JSON object");
  ModelConfig c;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw ConfigError("model config key '" + k + "' must hold a string");
    c.set(k, v.get<std::string>());
  }
  return c;
}

void ModelConfig::validate(int taxonomy_depth) const {
  auto positive = [](const char* name, std::size_t v) {
    if (v == 0) throw ConfigError(std::string("config ") + name + " must be positive");
  };
  positive("T", T);
  positive("F", F);
  positive("N", N);
  positive("D", D);
  positive("s", s);
  positive("I", I);
  positive("batch_size", batch_size);
  positive("max_epochs", max_epochs);
  positive("min_count", min_count);
  positive("workers", workers);
  if (level < 1 || level > taxonomy_depth) {
    throw ConfigError("config level " + std::to_string(level) + " outside taxonomy depth " +
                      std::to_string(taxonomy_depth));
  }
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("config lr must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("config dropout must lie in [0, 1)");
  if (history) {
    if (!use_text && !use_label) throw ConfigError("history is on but both use_text and use_label are off");
    if (use_text && T % 2 != 0) throw ConfigError("config T must be even for the positional encoding");
  }
}

}  // namespace patcls
