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
#include <memory>
#include <span>
#include <vector>

#include "patcls/code_correlation.hpp"
#include "patcls/config.hpp"
#include "patcls/corpus.hpp"
#include "patcls/history.hpp"
#include "patcls/predictor.hpp"
#include "patcls/text_encoder.hpp"

namespace patcls {

// Full model: text encoder, optional taxonomy correlation, optional history
// encoder and the predictor, all registered in one ModelParams.
class PatentClassifier {
 public:
  PatentClassifier(const ModelConfig& config, const Taxonomy& tax, std::size_t vocab_size);

  PatentClassifier(const PatentClassifier&) = delete;
  PatentClassifier& operator=(const PatentClassifier&) = delete;
  PatentClassifier(PatentClassifier&&) = default;
  PatentClassifier& operator=(PatentClassifier&&) = default;

  const ModelConfig& config() const { return config_; }
  const Taxonomy& taxonomy() const { return *tax_; }
  std::size_t num_codes() const { return tax_->size(config_.level); }
  std::size_t vocab_size() const { return vocab_size_; }
  const ModelParams& params() const { return params_; }
  ModelParams& params() { return params_; }

  const TextEncoder& text_encoder() const { return *text_; }
  const CodeCorrelation* code_correlation() const { return icl_.get(); }
  const HistoryEncoder* history_encoder() const { return history_.get(); }
  const Predictor& predictor() const { return *predictor_; }

  std::size_t load_pretrained(const PretrainedVectors& vectors, const Vocabulary& vocab);

  // H^P_q, or an undefined tensor when correlation is off. Shared by all
  // patents of a batch.
  Tensor code_representations(const ForwardContext& ctx) const;

  // M_B, the zero vector when history is off or empty.
  Tensor behavior(std::span<const PatentRecord* const> history) const;

  // History records for `record` as the model sees it (empty when off).
  std::vector<const PatentRecord*> history_for(const PatentRecord& record, const CorpusSplit& corpus,
                                               HistoryScope scope) const;

  Tensor logits(const PatentRecord& record, std::span<const PatentRecord* const> history, const Tensor& code_repr,
                const ForwardContext& ctx) const;

  // Eval-mode probabilities without recording a graph.
  std::vector<float> probabilities(const PatentRecord& record, std::span<const PatentRecord* const> history,
                                   const Tensor& code_repr) const;

  // Multi-hot targets at the classification level.
  std::vector<float> targets(const PatentRecord& record) const;

 private:
  ModelConfig config_;
  std::shared_ptr<const Taxonomy> tax_;
  std::size_t vocab_size_ = 0;
  ModelParams params_;
  std::unique_ptr<TextEncoder> text_;
  std::unique_ptr<CodeCorrelation> icl_;
  std::unique_ptr<HistoryEncoder> history_;
  std::unique_ptr<Predictor> predictor_;
};

}  // namespace patcls
