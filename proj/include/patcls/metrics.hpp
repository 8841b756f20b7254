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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace patcls {

struct RankedPrediction {
  std::string id;
  std::vector<int> ranking;  // code indices, most probable first, no duplicates
  std::vector<int> truth;    // true code set
};

// Code indices by descending probability; equal probabilities keep code order.
std::vector<int> rank_codes(std::span<const float> probs);

// |top-k ∩ S| / k
double precision_at_k(const RankedPrediction& r, std::size_t k);
// |top-k ∩ S| / |S|
double recall_at_k(const RankedPrediction& r, std::size_t k);
// DCG@k with gains 1/log2(pos + 1), over the ideal DCG of min(k, |S|) hits.
double ndcg_at_k(const RankedPrediction& r, std::size_t k);

enum class Metric { kPrecision, kRecall, kNdcg };
std::string_view metric_name(Metric m);

struct MetricTable {
  std::vector<std::size_t> ks;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> ndcg;
  std::size_t patents = 0;

  double value(Metric m, std::size_t k) const;
  std::string to_text() const;
  // Columns metric,K,value.
  std::string to_csv() const;
  nlohmann::json to_json() const;

  bool operator==(const MetricTable&) const = default;
};

// Unweighted means over patents with a nonempty truth set.
MetricTable evaluate_run(std::span<const RankedPrediction> preds, std::span<const std::size_t> ks);
MetricTable evaluate_run(std::span<const RankedPrediction> preds);

}  // namespace patcls
