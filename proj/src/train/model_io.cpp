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

#include "patcls/model_io.hpp"

#include "patcls/checkpoint.hpp"
#include "patcls/errors.hpp"

namespace patcls {

nlohmann::json model_metadata(const PatentClassifier& model, const Vocabulary& vocab, const std::string& corpus_dir,
                              const nlohmann::json& extra) {
  nlohmann::json meta;
  meta["config"] = model.config().to_json();
  meta["taxonomy"] = model.taxonomy().to_json();
  meta["vocab"] = vocab.words();
  meta["corpus_dir"] = corpus_dir;
  meta["extra"] = extra;
  return meta;
}

void save_model(const std::filesystem::path& path, const PatentClassifier& model, const Vocabulary& vocab,
                const std::string& corpus_dir, const nlohmann::json& extra) {
  if (vocab.size() != model.vocab_size()) {
    throw ContractError("saving a model built for " + std::to_string(model.vocab_size()) + " words with a " +
                        std::to_string(vocab.size()) + "-word vocabulary");
  }
  write_checkpoint(path, model_metadata(model, vocab, corpus_dir, extra), model.params());
}

LoadedModel load_model(const std::filesystem::path& path) {
  CheckpointFile file = read_checkpoint(path);
  const nlohmann::json& meta = file.metadata;
  ModelConfig config;
  Taxonomy tax;
  std::vector<std::string> words;
  try {
    config = ModelConfig::from_json(meta.at("config"));
    tax = Taxonomy::from_json(meta.at("taxonomy"));
    words = meta.at("vocab").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("checkpoint '" + path.string() + "' has incomplete metadata: " + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError("checkpoint '" + path.string() + "' has an invalid config: " + e.what());
  }
  Vocabulary vocab(std::move(words));
  PatentClassifier model(config, tax, vocab.size());
  load_into(file, model.params());
  return LoadedModel{std::move(model), std::move(vocab), meta.value("corpus_dir", std::string()), meta};
}

}  // namespace patcls
