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

#include "patcls/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "patcls/errors.hpp"

namespace patcls {
namespace {

void check(const RankedPrediction& r, std::size_t k) {
  if (k == 0) throw ContractError("metric cutoff k must be at least 1");
  if (r.ranking.size() < k) {
    throw ContractError("ranking for '" + r.id + "' has " + std::to_string(r.ranking.size()) +
                        " codes, fewer than k = " + std::to_string(k));
  }
  std::unordered_set<int> seen;
  for (int c : r.ranking) {
    if (!seen.insert(c).second) {
      throw ContractError("ranking for '" + r.id + "' repeats code " + std::to_string(c));
    }
  }
}

std::size_t distinct_truth(const RankedPrediction& r) {
  return std::unordered_set<int>(r.truth.begin(), r.truth.end()).size();
}

bool hit(const RankedPrediction& r, std::size_t pos) {
  return std::find(r.truth.begin(), r.truth.end(), r.ranking[pos]) != r.truth.end();
}

std::size_t hits(const RankedPrediction& r, std::size_t k) {
  std::size_t h = 0;
  for (std::size_t i = 0; i < k; ++i) h += hit(r, i);
  return h;
}

}  // namespace

std::vector<int> rank_codes(std::span<const float> probs) {
  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return probs[a] > probs[b]; });
  return order;
}

double precision_at_k(const RankedPrediction& r, std::size_t k) {
  check(r, k);
  return static_cast<double>(hits(r, k)) / static_cast<double>(k);
}

double recall_at_k(const RankedPrediction& r, std::size_t k) {
  check(r, k);
  const std::size_t n = distinct_truth(r);
  if (n == 0) throw ContractError("recall for '" + r.id + "' with an empty label set");
  return static_cast<double>(hits(r, k)) / static_cast<double>(n);
}

double ndcg_at_k(const RankedPrediction& r, std::size_t k) {
  check(r, k);
  const std::size_t n = distinct_truth(r);
  if (n == 0) throw ContractError("ndcg for '" + r.id + "' with an empty label set");
  double dcg = 0.0, ideal = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double gain = 1.0 / std::log2(static_cast<double>(i) + 2.0);
    if (hit(r, i)) dcg += gain;
    if (i < n) ideal += gain;
  }
  return dcg / ideal;
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kPrecision: return "Precision";
    case Metric::kRecall: return "Recall";
    case Metric::kNdcg: return "NDCG";
  }
  return "?";
}

double MetricTable::value(Metric m, std::size_t k) const {
  const auto it = std::find(ks.begin(), ks.end(), k);
  if (it == ks.end()) throw LookupError("metric table has no K = " + std::to_string(k));
  const auto i = static_cast<std::size_t>(it - ks.begin());
  switch (m) {
    case Metric::kPrecision: return precision[i];
    case Metric::kRecall: return recall[i];
    case Metric::kNdcg: return ndcg[i];
  }
  return 0.0;
}

std::string MetricTable::to_text() const {
  std::string out;
  char buf[64];
  out += "metric    ";
  for (std::size_t k : ks) {
    std::snprintf(buf, sizeof buf, "  @%-7zu", k);
    out += buf;
  }
  out += '\n';
  for (Metric m : {Metric::kPrecision, Metric::kRecall, Metric::kNdcg}) {
    std::snprintf(buf, sizeof buf, "%-10s", std::string(metric_name(m)).c_str());
    out += buf;
    for (std::size_t k : ks) {
      std::snprintf(buf, sizeof buf, "  %.6f", value(m, k));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string MetricTable::to_csv() const {
  std::string out = "metric,K,value\n";
  char buf[96];
  for (Metric m : {Metric::kPrecision, Metric::kRecall, Metric::kNdcg}) {
    for (std::size_t k : ks) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.17g\n", std::string(metric_name(m)).c_str(), k, value(m, k));
      out += buf;
    }
  }
  return out;
}

nlohmann::json MetricTable::to_json() const {
  nlohmann::json j;
  j["patents"] = patents;
  j["ks"] = ks;
  j["precision"] = precision;
  j["recall"] = recall;
  j["ndcg"] = ndcg;
  return j;
}

MetricTable evaluate_run(std::span<const RankedPrediction> preds, std::span<const std::size_t> ks) {
  if (ks.empty()) throw ContractError("evaluate_run needs at least one cutoff");
  MetricTable t;
  t.ks.assign(ks.begin(), ks.end());
  t.precision.assign(ks.size(), 0.0);
  t.recall.assign(ks.size(), 0.0);
  t.ndcg.assign(ks.size(), 0.0);
  for (const RankedPrediction& r : preds) {
    if (r.truth.empty()) continue;
    ++t.patents;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      t.precision[i] += precision_at_k(r, ks[i]);
      t.recall[i] += recall_at_k(r, ks[i]);
      t.ndcg[i] += ndcg_at_k(r, ks[i]);
    }
  }
  if (t.patents == 0) throw ContractError("evaluate_run: no predictions with a nonempty label set");
  const double n = static_cast<double>(t.patents);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    t.precision[i] /= n;
    t.recall[i] /= n;
    t.ndcg[i] /= n;
  }
  return t;
}

MetricTable evaluate_run(std::span<const RankedPrediction> preds) {
  static constexpr std::size_t kDefault[] = {1, 3, 5};
  return evaluate_run(preds, kDefault);
}

}  // namespace patcls
