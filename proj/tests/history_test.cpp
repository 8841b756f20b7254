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

#include <cmath>
#include <cstring>

#include "gradcheck.hpp"
#include "patcls/errors.hpp"
#include "patcls/history.hpp"
#include "patcls/ops.hpp"
#include "support.hpp"

namespace patcls {
namespace {

using testing::random_tensor;

void expect_matrix(const Tensor& t, const std::vector<std::vector<float>>& want) {
  ASSERT_EQ(t.rows(), want.size());
  for (std::size_t r = 0; r < want.size(); ++r) {
    ASSERT_EQ(t.cols(), want[r].size());
    for (std::size_t c = 0; c < want[r].size(); ++c) EXPECT_FLOAT_EQ(t.at(r, c), want[r][c]) << r << "," << c;
  }
}

TEST(PatentGraph, BandAdjacencyHandCases) {
  expect_matrix(band_graph(3, 2).adjacency, {{1, 0, 0}, {0.5f, 1, 0}, {0, 0.5f, 1}});
  expect_matrix(band_graph(3, 1).adjacency, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const Tensor full = band_graph(5, 7).adjacency;
  EXPECT_FLOAT_EQ(full.at(4, 0), 1.0f / 5);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = r + 1; c < 5; ++c) EXPECT_EQ(full.at(r, c), 0.0f);
  }
  EXPECT_THROW(band_graph(3, 0), ConfigError);
}

TEST(PatentGraph, EntriesComeFromHarmonicSet) {
  const std::size_t s = 4;
  const Tensor a = band_graph(10, s).adjacency;
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t c = 0; c < 10; ++c) {
      const float x = a.at(r, c);
      if (c > r || r - c >= s) {
        EXPECT_EQ(x, 0.0f);
      } else {
        EXPECT_EQ(x, 1.0f / static_cast<float>(r - c + 1));
      }
    }
  }
}

TEST(PatentGraph, BuildFromHistory) {
  const Taxonomy tax = testing::mini_taxonomy();
  std::vector<PatentRecord> recs;
  for (int i = 0; i < 4; ++i) recs.push_back(testing::make_record("p" + std::to_string(i), "a", i, {2}, 3, {0}, tax));
  std::vector<const PatentRecord*> hist;
  EXPECT_FALSE(build_patent_graph(hist, 4, 2).has_value());
  for (const auto& r : recs) hist.push_back(&r);
  const auto g = build_patent_graph(std::span(hist).first(2), 4, 2);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->nodes, 2u);
  expect_matrix(g->adjacency, {{1, 0}, {0.5f, 1}});
  EXPECT_THROW(build_patent_graph(hist, 3, 2), ContractError);
}

TEST(Positional, TableValues) {
  const Tensor pe = positional_table(3, 4);
  expect_matrix(positional_table(1, 6), {{0, 1, 0, 1, 0, 1}});
  EXPECT_NEAR(pe.at(1, 0), 0.84147, 1e-5);
  EXPECT_NEAR(pe.at(1, 1), std::cos(1.0), 1e-6);
  EXPECT_NEAR(pe.at(2, 2), std::sin(2.0 / 100.0), 1e-6);  // 10000^(2/4) = 100
  const Tensor again = positional_table(3, 4);
  EXPECT_EQ(0, std::memcmp(pe.data(), again.data(), pe.numel() * sizeof(float)));
  EXPECT_THROW(positional_table(3, 5), ConfigError);
}

TEST(Positional, EncodeConcatenatesOrZeroes) {
  Rng rng(1);
  const Tensor x = random_tensor({3, 4}, rng, false);
  const Tensor on = positional_encode(x);
  const Tensor off = positional_encode(x, 10000.0, false);
  EXPECT_EQ(on.shape(), (Shape{3, 8}));
  EXPECT_EQ(off.shape(), (Shape{3, 8}));
  const Tensor pe = positional_table(3, 4);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      EXPECT_EQ(on.at(r, c), x.at(r, c));
      EXPECT_EQ(on.at(r, 4 + c), pe.at(r, c));
      EXPECT_EQ(off.at(r, 4 + c), 0.0f);
    }
  }
  EXPECT_THROW(positional_encode(random_tensor({2, 3}, rng)), ConfigError);
  EXPECT_THROW(positional_encode(random_tensor({2, 3}, rng), 10000.0, false), ConfigError);
}

TEST(Gcn, IdentityGraphIsPlainLayer) {
  Rng rng(2);
  const Tensor h0 = random_tensor({4, 3}, rng, false);
  const Tensor w = random_tensor({3, 2}, rng, false);
  const Tensor ws[] = {w};
  const Tensor out = gcn_forward(band_graph(4, 1), h0, ws);
  const Tensor want = relu(matmul(h0, w));
  for (std::size_t i = 0; i < out.numel(); ++i) EXPECT_EQ(out.at(i), want.at(i));
  const Tensor zero[] = {Tensor::zeros({3, 2})};
  const Tensor zero_out = gcn_forward(band_graph(4, 2), h0, zero);
  for (float x : zero_out.values()) EXPECT_EQ(x, 0.0f);
}

TEST(Gcn, HandTwoNodeCase) {
  const Tensor ws[] = {Tensor({1, 1}, {1.0f})};
  expect_matrix(gcn_forward(band_graph(2, 2), Tensor({2, 1}, {1.0f, 2.0f}), ws), {{1}, {2.5f}});
}

TEST(Gcn, WidthMismatchRejected) {
  Rng rng(3);
  const Tensor ws[] = {random_tensor({3, 2}, rng), random_tensor({3, 2}, rng)};
  EXPECT_THROW(gcn_forward(band_graph(2, 2), random_tensor({2, 4}, rng), std::span(ws).first(1)), DimensionError);
  EXPECT_THROW(gcn_forward(band_graph(2, 2), random_tensor({2, 3}, rng), ws), DimensionError);
  EXPECT_THROW(gcn_forward(band_graph(3, 2), random_tensor({2, 3}, rng), std::span(ws).first(1)), DimensionError);
}

// A change to patent j never reaches rows of patents before it.
TEST(Gcn, TemporalCausality) {
  Rng rng(4);
  const std::size_t d = 6, s = 2;
  const Tensor ws[] = {random_tensor({3, 4}, rng, false), random_tensor({4, 4}, rng, false)};
  const Tensor h0 = random_tensor({d, 3}, rng, false);
  const Tensor base = gcn_forward(band_graph(d, s), h0, ws);
  for (std::size_t j = 0; j < d; ++j) {
    Tensor moved = h0.clone();
    for (std::size_t c = 0; c < 3; ++c) moved.values()[j * 3 + c] += 5.0f;
    const Tensor out = gcn_forward(band_graph(d, s), moved, ws);
    for (std::size_t r = 0; r < j; ++r) {
      for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(out.at(r, c), base.at(r, c)) << "j=" << j << " r=" << r;
    }
    // Two layers with s = 2 reach at most two rows ahead.
    for (std::size_t r = j + 3; r < d; ++r) {
      for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(out.at(r, c), base.at(r, c));
    }
  }
}

TEST(Readout, MeanPerChannelLabelFirst) {
  Rng rng(5);
  const Tensor t = random_tensor({1, 3}, rng), l = random_tensor({1, 3}, rng);
  const Tensor one = readout_fuse(t, l);
  ASSERT_EQ(one.numel(), 6u);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_FLOAT_EQ(one.at(c), l.at(c));
    EXPECT_FLOAT_EQ(one.at(3 + c), t.at(c));
  }
  const Tensor zeros = readout_fuse(Tensor::zeros({4, 3}), Tensor::zeros({4, 3}));
  for (float x : zeros.values()) EXPECT_EQ(x, 0.0f);

  const Tensor t4 = random_tensor({4, 3}, rng), l4 = random_tensor({4, 3}, rng);
  const std::int32_t perm[] = {2, 0, 3, 1};
  const Tensor a = readout_fuse(t4, l4);
  const Tensor b = readout_fuse(gather_rows(t4, perm), gather_rows(l4, perm));
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.at(i), b.at(i), 1e-6);

  const Tensor no_label = readout_fuse(t4, Tensor());
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(no_label.at(c), 0.0f);
    EXPECT_FLOAT_EQ(no_label.at(3 + c), a.at(3 + c));
  }
  EXPECT_THROW(readout_fuse(t4, random_tensor({3, 3}, rng)), DimensionError);
  EXPECT_THROW(readout_fuse(Tensor(), Tensor()), ContractError);
}

class HistoryEncoderTest : public ::testing::Test {
 protected:
  // D = 4, s = 2, T = 4, F = 3, I = 2 at level 3 of the 2/4/8 taxonomy.
  HistoryOptions opts() const { return {3, 4, 2, 2, true, true, true}; }

  void SetUp() override {
    Rng rng(6);
    word_emb_ = random_tensor({20, 4}, rng, true);
    const std::vector<std::vector<std::int32_t>> texts{{2, 3, 4}, {5}, {6, 0, 7, 8, 9}, {10, 11}};
    const std::vector<std::vector<int>> labels{{0, 3}, {1}, {7}, {3, 4}};
    for (std::size_t i = 0; i < texts.size(); ++i) {
      records_.push_back(testing::make_record("h" + std::to_string(i), "a", static_cast<std::int64_t>(i),
                                              texts[i], 5, labels[i], tax_));
    }
    for (const auto& r : records_) history_.push_back(&r);
  }

  // The documented pipeline written out with free functions.
  Tensor pipeline(const HistoryEncoder& enc, const Tensor& words, const Tensor& w_b, std::span<const Tensor> text_w,
                  std::span<const Tensor> label_w, bool use_pe = true) const {
    const auto g = build_patent_graph(history_, 4, 2);
    std::vector<float> multi_hot(history_.size() * 8, 0.0f);
    for (std::size_t r = 0; r < history_.size(); ++r) {
      for (int c : history_[r]->labels(3)) multi_hot[r * 8 + c] = 1.0f;
    }
    const Tensor xs = matmul(Tensor({history_.size(), 8}, multi_hot), w_b);
    const Tensor ht = gcn_forward(*g, positional_encode(enc.text_features(history_, words), 10000.0, use_pe), text_w);
    const Tensor hl = gcn_forward(*g, positional_encode(xs, 10000.0, use_pe), label_w);
    return readout_fuse(ht, hl);
  }

  Taxonomy tax_ = testing::mini_taxonomy();
  Tensor word_emb_;
  std::vector<PatentRecord> records_;
  std::vector<const PatentRecord*> history_;
};

TEST_F(HistoryEncoderTest, FeatureChannels) {
  ModelParams params;
  Rng rng(7);
  const HistoryEncoder enc(params, 8, 4, 3, opts(), rng);
  const Tensor xc = enc.text_features(history_, word_emb_);
  EXPECT_EQ(xc.shape(), (Shape{4, 4}));
  for (std::size_t c = 0; c < 4; ++c) {
    const double mean = (word_emb_.at(6, c) + word_emb_.at(0, c) + word_emb_.at(7, c) + word_emb_.at(8, c) +
                         word_emb_.at(9, c)) / 5.0;
    EXPECT_NEAR(xc.at(2, c), mean, 1e-6);
    EXPECT_NEAR(xc.at(1, c), word_emb_.at(5, c), 1e-6);
  }
  const Tensor xs = enc.label_features(history_);
  const Tensor& wb = params.get("hist.label_proj");
  EXPECT_EQ(xs.shape(), (Shape{4, 6}));
  for (std::size_t c = 0; c < 6; ++c) EXPECT_NEAR(xs.at(3, c), wb.at(3, c) + wb.at(4, c), 1e-6);
}

TEST_F(HistoryEncoderTest, ForwardMatchesPipeline) {
  ModelParams params;
  Rng rng(8);
  const HistoryEncoder enc(params, 8, 4, 3, opts(), rng);
  const Tensor text_w[] = {params.get("hist.text.W1"), params.get("hist.text.W2")};
  const Tensor label_w[] = {params.get("hist.label.W1"), params.get("hist.label.W2")};
  EXPECT_EQ(text_w[0].shape(), (Shape{8, 3}));
  EXPECT_EQ(label_w[0].shape(), (Shape{12, 3}));
  const Tensor out = enc.forward(history_, word_emb_);
  const Tensor want = pipeline(enc, word_emb_, params.get("hist.label_proj"), text_w, label_w);
  ASSERT_EQ(out.numel(), 6u);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(out.at(i), want.at(i));
}

TEST_F(HistoryEncoderTest, EmptyHistoryGivesZeros) {
  ModelParams params;
  Rng rng(9);
  const HistoryEncoder enc(params, 8, 4, 3, opts(), rng);
  const Tensor out = enc.forward({}, word_emb_);
  EXPECT_EQ(out.shape(), (Shape{6}));
  for (float x : out.values()) EXPECT_EQ(x, 0.0f);
}

TEST_F(HistoryEncoderTest, ZeroWeightsSinglePatentGivesZeros) {
  ModelParams params;
  Rng rng(10);
  const HistoryEncoder enc(params, 8, 4, 3, opts(), rng);
  for (const auto& e : params) {
    Tensor t = e.tensor;
    std::fill(t.values().begin(), t.values().end(), 0.0f);
  }
  const Tensor out = enc.forward(std::span(history_).first(1), word_emb_);
  for (float x : out.values()) EXPECT_EQ(x, 0.0f);
}

TEST_F(HistoryEncoderTest, AblationsKeepWidths) {
  HistoryOptions no_pe = opts();
  no_pe.use_pe = false;
  ModelParams params;
  Rng rng(11);
  const HistoryEncoder enc(params, 8, 4, 3, no_pe, rng);
  EXPECT_EQ(params.get("hist.text.W1").shape(), (Shape{8, 3}));
  const Tensor text_w[] = {params.get("hist.text.W1"), params.get("hist.text.W2")};
  const Tensor label_w[] = {params.get("hist.label.W1"), params.get("hist.label.W2")};
  const Tensor out = enc.forward(history_, word_emb_);
  const Tensor want = pipeline(enc, word_emb_, params.get("hist.label_proj"), text_w, label_w, false);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(out.at(i), want.at(i));
}

TEST_F(HistoryEncoderTest, NoLabelAblationZeroesLabelHalf) {
  HistoryOptions text_only = opts();
  text_only.use_label = false;
  ModelParams params;
  Rng rng(12);
  const HistoryEncoder enc(params, 8, 4, 3, text_only, rng);
  EXPECT_FALSE(params.contains("hist.label_proj"));
  EXPECT_FALSE(params.contains("hist.label.W1"));
  const Tensor out = enc.forward(history_, word_emb_);
  const Tensor text_w[] = {params.get("hist.text.W1"), params.get("hist.text.W2")};
  const auto g = build_patent_graph(history_, 4, 2);
  const Tensor ht = mean_rows(gcn_forward(*g, positional_encode(enc.text_features(history_, word_emb_)), text_w));
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(out.at(c), 0.0f);
    EXPECT_EQ(out.at(3 + c), ht.at(c));
  }
  EXPECT_THROW(enc.label_features(history_), ContractError);
  HistoryOptions none = opts();
  none.use_label = none.use_text = false;
  EXPECT_THROW(HistoryEncoder(params, 8, 4, 3, none, rng), ConfigError);
}

TEST_F(HistoryEncoderTest, GradientThroughPipeline) {
  ModelParams params;
  Rng rng(13);
  const HistoryEncoder enc(params, 8, 4, 3, opts(), rng);
  Rng init(14);
  // Weights kept positive-leaning so the ReLUs stay mostly active.
  const std::vector<Tensor> in{random_tensor({20, 4}, init),         random_tensor({8, 6}, init),
                               random_tensor({8, 3}, init, true, -0.3, 1),  random_tensor({3, 3}, init, true, -0.3, 1),
                               random_tensor({12, 3}, init, true, -0.3, 1), random_tensor({3, 3}, init, true, -0.3, 1)};
  const Tensor probe = random_tensor({6}, init, false);
  const auto f = [&](const std::vector<Tensor>& t) {
    const Tensor tw[] = {t[2], t[3]};
    const Tensor lw[] = {t[4], t[5]};
    return sum(mul(pipeline(enc, t[0], t[1], tw, lw), probe));
  };
  EXPECT_LE(testing::op_gradient_error(f, in, 5), 1e-3);
}

}  // namespace
}  // namespace patcls
