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
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "patcls/classifier.hpp"
#include "patcls/metrics.hpp"

namespace patcls {

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  MetricTable validation;
  double score = 0.0;  // validation NDCG@5

  bool operator==(const EpochRecord&) const = default;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_score = 0.0;
  Split selection_split = Split::kValid;
  bool stopped_early = false;
  double wall_seconds = 0.0;

  // Everything except wall time, which is the only nondeterministic field.
  bool same_run(const TrainReport& other) const;
  nlohmann::json to_json(bool include_wall_time = true) const;
};

struct TrainOptions {
  std::ostream* log = nullptr;
  const PretrainedVectors* pretrained = nullptr;
  const Vocabulary* vocab = nullptr;  // required with `pretrained`
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  PatentClassifier model;  // parameters of the best epoch
  TrainReport report;
};

// Mini-batch Adam on the train split with early stopping on validation
// NDCG@5 (the train split stands in when validation is empty). Histories are
// drawn from the train split only. `corpus` must already be encoded with N.
TrainResult train(const ModelConfig& config, const CorpusSplit& corpus, const Taxonomy& tax,
                  std::size_t vocab_size, const TrainOptions& options = {});

// Eval-mode probabilities for each record, histories drawn from every split
// strictly before the record's time. Parallel over `workers` threads.
std::vector<std::vector<float>> score_records(const PatentClassifier& model, const CorpusSplit& corpus,
                                              std::span<const PatentRecord> records, std::size_t workers = 1);

std::vector<RankedPrediction> rank_records(const PatentClassifier& model, const CorpusSplit& corpus,
                                           std::span<const PatentRecord> records, std::size_t workers = 1);

MetricTable evaluate(const PatentClassifier& model, const CorpusSplit& corpus, Split split,
                     std::span<const std::size_t> ks, std::size_t workers = 1);
MetricTable evaluate(const PatentClassifier& model, const CorpusSplit& corpus, Split split,
                     std::size_t workers = 1);

}  // namespace patcls
