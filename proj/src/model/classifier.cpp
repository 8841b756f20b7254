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

#include "patcls/classifier.hpp"

#include <string>

#include "patcls/errors.hpp"

namespace patcls {

PatentClassifier::PatentClassifier(const ModelConfig& config, const Taxonomy& tax, std::size_t vocab_size)
    : config_(config), tax_(std::make_shared<const Taxonomy>(tax)), vocab_size_(vocab_size) {
  config_.validate(tax.depth());
  Rng rng(config_.seed);
  const std::size_t codes = tax.size(config_.level);
  text_ = std::make_unique<TextEncoder>(params_, vocab_size, config_.T, config_.F, rng);
  if (config_.icl_mode != IclMode::kNone) {
    icl_ = std::make_unique<CodeCorrelation>(params_, *tax_, config_.icl_mode, config_.level, 2 * config_.F,
                                             config_.horizontal_self, rng);
  }
  if (config_.history) {
    HistoryOptions opts;
    opts.level = config_.level;
    opts.d_max = config_.D;
    opts.window = config_.s;
    opts.layers = config_.I;
    opts.use_pe = config_.use_pe;
    opts.use_text = config_.use_text;
    opts.use_label = config_.use_label;
    history_ = std::make_unique<HistoryEncoder>(params_, codes, config_.T, config_.F, opts, rng);
  }
  predictor_ = std::make_unique<Predictor>(params_, codes, config_.F, rng);
}

std::size_t PatentClassifier::load_pretrained(const PretrainedVectors& vectors, const Vocabulary& vocab) {
  if (vocab.size() != vocab_size_) {
    throw ContractError("vocabulary of " + std::to_string(vocab.size()) + " words for a model built with " +
                        std::to_string(vocab_size_));
  }
  return text_->load_pretrained(vectors, vocab);
}

Tensor PatentClassifier::code_representations(const ForwardContext& ctx) const {
  return icl_ ? icl_->forward(ctx) : Tensor();
}

Tensor PatentClassifier::behavior(std::span<const PatentRecord* const> history) const {
  if (!history_) return Tensor::zeros({2 * config_.F});
  return history_->forward(history, text_->word_embeddings());
}

std::vector<const PatentRecord*> PatentClassifier::history_for(const PatentRecord& record,
                                                               const CorpusSplit& corpus,
                                                               HistoryScope scope) const {
  if (!history_) return {};
  return corpus.history_of(record.assignee, record.time, config_.D, scope);
}

Tensor PatentClassifier::logits(const PatentRecord& record, std::span<const PatentRecord* const> history,
                                const Tensor& code_repr, const ForwardContext& ctx) const {
  if (record.tokens.size() != config_.N) {
    throw ContractError("patent '" + record.id + "' is encoded to " + std::to_string(record.tokens.size()) +
                        " tokens, model expects N = " + std::to_string(config_.N));
  }
  if (record.valid_len == 0) throw ContractError("patent '" + record.id + "' has no words to attend over");
  const Tensor v = text_->encode(record.tokens, record.valid_len, ctx);
  return predictor_->logits(v, record.valid_len, code_repr, behavior(history), ctx);
}

std::vector<float> PatentClassifier::probabilities(const PatentRecord& record,
                                                   std::span<const PatentRecord* const> history,
                                                   const Tensor& code_repr) const {
  NoGradGuard guard;
  const Tensor p = sigmoid(logits(record, history, code_repr, ForwardContext::eval()));
  return {p.values().begin(), p.values().end()};
}

std::vector<float> PatentClassifier::targets(const PatentRecord& record) const {
  std::vector<float> y(num_codes(), 0.0f);
  for (int c : record.labels(config_.level)) y.at(static_cast<std::size_t>(c)) = 1.0f;
  return y;
}

}  // namespace patcls
