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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "metric_oracle.hpp"
#include "patcls/errors.hpp"
#include "patcls/metrics.hpp"

namespace patcls {
namespace {

// Codes a=0, b=1, c=2.
RankedPrediction pred(std::vector<int> ranking, std::vector<int> truth) { return {"p", std::move(ranking), std::move(truth)}; }

TEST(Metrics, HandCases) {
  const RankedPrediction r = pred({0, 2, 1}, {0, 1});
  EXPECT_DOUBLE_EQ(precision_at_k(r, 3), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(recall_at_k(r, 3), 1.0);
  const RankedPrediction n = pred({1, 0, 2}, {0});
  EXPECT_NEAR(ndcg_at_k(n, 3), 0.63093, 1e-5);
  EXPECT_DOUBLE_EQ(ndcg_at_k(n, 3), 1.0 / std::log2(3.0));
}

TEST(Metrics, Extremes) {
  const RankedPrediction perfect = pred({3, 1, 0, 2}, {1, 3, 0});
  EXPECT_DOUBLE_EQ(precision_at_k(perfect, 3), 1.0);
  EXPECT_DOUBLE_EQ(ndcg_at_k(perfect, 3), 1.0);
  EXPECT_DOUBLE_EQ(ndcg_at_k(perfect, 1), 1.0);
  const RankedPrediction miss = pred({3, 1, 0, 2}, {2});
  EXPECT_DOUBLE_EQ(precision_at_k(miss, 3), 0.0);
  EXPECT_DOUBLE_EQ(recall_at_k(miss, 3), 0.0);
  EXPECT_DOUBLE_EQ(ndcg_at_k(miss, 3), 0.0);
  const RankedPrediction single = pred({2, 0, 1}, {2});
  EXPECT_DOUBLE_EQ(recall_at_k(single, 1), precision_at_k(single, 1));
}

TEST(Metrics, ContractErrors) {
  EXPECT_THROW(precision_at_k(pred({0, 1}, {0}), 3), ContractError);
  EXPECT_THROW(precision_at_k(pred({0, 1}, {0}), 0), ContractError);
  EXPECT_THROW(precision_at_k(pred({0, 0, 1}, {0}), 2), ContractError);
  EXPECT_THROW(recall_at_k(pred({0, 1}, {}), 1), ContractError);
  EXPECT_THROW(ndcg_at_k(pred({0, 1}, {}), 1), ContractError);
  EXPECT_THROW(evaluate_run({}), ContractError);
}

TEST(Metrics, AgreeWithOracleOnRandomCases) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto c = testing::random_case(5 + static_cast<int>(seed % 36), seed);
    const RankedPrediction r{"x", c.ranking, c.truth};
    for (int k : {1, 3, 5}) {
      const auto o = testing::oracle_scores(c, k);
      EXPECT_NEAR(precision_at_k(r, k), o.precision, 1e-9) << seed;
      EXPECT_NEAR(recall_at_k(r, k), o.recall, 1e-9) << seed;
      EXPECT_NEAR(ndcg_at_k(r, k), o.ndcg, 1e-9) << seed;
    }
  }
}

TEST(Metrics, InvariantsOnRandomCases) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto c = testing::random_case(12, 5000 + seed);
    const RankedPrediction r{"x", c.ranking, c.truth};
    double last_recall = 0;
    for (std::size_t k = 1; k <= 12; ++k) {
      for (double v : {precision_at_k(r, k), recall_at_k(r, k), ndcg_at_k(r, k)}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0 + 1e-12);
      }
      EXPECT_GE(recall_at_k(r, k), last_recall);
      last_recall = recall_at_k(r, k);
      // NDCG is 1 exactly when the top min(k, |S|) positions are all true.
      bool top_true = true;
      for (std::size_t i = 0; i < std::min(k, c.truth.size()); ++i) {
        top_true &= std::find(c.truth.begin(), c.truth.end(), c.ranking[i]) != c.truth.end();
      }
      EXPECT_EQ(std::fabs(ndcg_at_k(r, k) - 1.0) < 1e-12, top_true);
    }
  }
}

TEST(EvaluateRun, MeansOverPatents) {
  const RankedPrediction right = pred({0, 1, 2, 3, 4}, {0});
  const RankedPrediction wrong = pred({1, 0, 2, 3, 4}, {0});
  const std::vector<RankedPrediction> both{right, wrong};
  const MetricTable t = evaluate_run(both);
  EXPECT_EQ(t.patents, 2u);
  EXPECT_DOUBLE_EQ(t.value(Metric::kPrecision, 1), 0.5);

  const std::vector<RankedPrediction> one{wrong};
  const MetricTable single = evaluate_run(one);
  for (std::size_t k : {1u, 3u, 5u}) {
    EXPECT_DOUBLE_EQ(single.value(Metric::kPrecision, k), precision_at_k(wrong, k));
    EXPECT_DOUBLE_EQ(single.value(Metric::kRecall, k), recall_at_k(wrong, k));
    EXPECT_DOUBLE_EQ(single.value(Metric::kNdcg, k), ndcg_at_k(wrong, k));
  }

  std::vector<RankedPrediction> doubled = both;
  doubled.insert(doubled.end(), both.begin(), both.end());
  const MetricTable d = evaluate_run(doubled);
  for (std::size_t i = 0; i < t.ks.size(); ++i) {
    EXPECT_NEAR(d.precision[i], t.precision[i], 1e-12);
    EXPECT_NEAR(d.recall[i], t.recall[i], 1e-12);
    EXPECT_NEAR(d.ndcg[i], t.ndcg[i], 1e-12);
  }

  // Unlabelled patents are skipped rather than counted as zeros.
  std::vector<RankedPrediction> with_empty = both;
  with_empty.push_back(pred({0, 1, 2, 3, 4}, {}));
  EXPECT_EQ(evaluate_run(with_empty).patents, 2u);
}

TEST(EvaluateRun, OutputFormats) {
  const std::vector<RankedPrediction> preds{pred({0, 1, 2, 3, 4}, {0, 2})};
  const MetricTable t = evaluate_run(preds);
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,K,value");
  EXPECT_NE(csv.find("Precision,1,1\n"), std::string::npos);
  EXPECT_NE(csv.find("Recall,3,1\n"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  const std::string text = t.to_text();
  EXPECT_NE(text.find("NDCG"), std::string::npos);
  EXPECT_NE(text.find("@5"), std::string::npos);
  EXPECT_EQ(t.to_json().at("patents"), 1);
  EXPECT_THROW(t.value(Metric::kRecall, 2), LookupError);
}

TEST(RankCodes, DescendingWithCodeOrderTies) {
  const std::vector<float> probs{0.2f, 0.9f, 0.2f, 0.5f, 0.9f};
  EXPECT_EQ(rank_codes(probs), (std::vector<int>{1, 4, 3, 0, 2}));
}

}  // namespace
}  // namespace patcls
