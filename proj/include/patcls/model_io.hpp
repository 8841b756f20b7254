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
#include <string>

#include <json.hpp>

#include "patcls/classifier.hpp"

namespace patcls {

struct LoadedModel {
  PatentClassifier model;
  Vocabulary vocab;
  std::string corpus_dir;
  nlohmann::json metadata;
};

// Checkpoint metadata: config, vocabulary, taxonomy, corpus location plus
// any caller extras under "extra".
nlohmann::json model_metadata(const PatentClassifier& model, const Vocabulary& vocab, const std::string& corpus_dir,
                              const nlohmann::json& extra = nlohmann::json::object());

void save_model(const std::filesystem::path& path, const PatentClassifier& model, const Vocabulary& vocab,
                const std::string& corpus_dir, const nlohmann::json& extra = nlohmann::json::object());

// Rebuilds the model from the embedded config and taxonomy, then loads every
// tensor. Mismatches raise CheckpointError.
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace patcls
