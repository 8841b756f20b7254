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

#include "gradcheck.hpp"
#include "patcls/errors.hpp"
#include "patcls/ops.hpp"
#include "patcls/text_encoder.hpp"
#include "support.hpp"

namespace patcls {
namespace {

using testing::random_tensor;

LstmDirection random_direction(std::size_t t, std::size_t f, Rng& rng, bool grad = false) {
  return {random_tensor({t, 4 * f}, rng, grad), random_tensor({f, 4 * f}, rng, grad),
          random_tensor({4 * f}, rng, grad)};
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(EmbedWords, GathersRowsAndZeroesPad) {
  Rng rng(1);
  const Tensor table = random_tensor({6, 3}, rng);
  const std::int32_t pads[] = {1, 1, 1};
  const Tensor all_pad = embed_words(pads, table);
  for (float x : all_pad.values()) EXPECT_EQ(x, 0.0f);
  const std::int32_t ids[] = {4, 0, 1, 4};
  const Tensor e = embed_words(ids, table);
  EXPECT_EQ(e.shape(), (Shape{4, 3}));
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(e.at(0, c), table.at(4, c));
    EXPECT_EQ(e.at(1, c), table.at(0, c));
    EXPECT_EQ(e.at(2, c), 0.0f);
  }
  const std::int32_t bad[] = {6};
  EXPECT_THROW(embed_words(bad, table), LookupError);
}

TEST(EmbedWords, GradientReachesOnlyUsedRows) {
  Rng rng(2);
  const Tensor table = random_tensor({6, 3}, rng);
  const std::int32_t ids[] = {2, 5, 2, 1};
  const Tensor w({4, 3}, testing::random_values(12, rng));
  sum(mul(embed_words(ids, table), w)).backward();
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_FLOAT_EQ(table.grad()[2 * 3 + c], w.at(0, c) + w.at(2, c));
    EXPECT_FLOAT_EQ(table.grad()[5 * 3 + c], w.at(1, c));
    for (std::size_t r : {0u, 1u, 3u, 4u}) EXPECT_EQ(table.grad()[r * 3 + c], 0.0f);
  }
  // Finite differences on row 5 agree with the analytic gradient.
  const std::vector<Tensor> in{random_tensor({6, 3}, rng)};
  const auto f = [&](const std::vector<Tensor>& t) { return sum(mul(embed_words(ids, t[0]), w)); };
  EXPECT_LE(testing::op_gradient_error(f, in, 1), 1e-3);
}

TEST(Lstm, HandEvaluatedSingleStep) {
  // T = F = 1, every gate weight 1, no recurrence or bias. Gate order i, f, g, o.
  const LstmDirection p{Tensor({1, 4}, {1, 1, 1, 1}), Tensor({1, 4}, {0, 0, 0, 0}), Tensor({4}, {0, 0, 0, 0})};
  const Tensor h = lstm_direction(Tensor({1, 1}, {1.0f}), 1, p, false);
  const double c = sigmoid(1) * std::tanh(1.0);
  EXPECT_NEAR(h.item(), sigmoid(1) * std::tanh(c), 1e-6);
}

TEST(Lstm, TwoStepsCarryCellState) {
  const LstmDirection p{Tensor({1, 4}, {1, 1, 1, 1}), Tensor({1, 4}, {0.5f, -0.5f, 0.25f, 1}),
                        Tensor({4}, {0, 0.1f, 0, 0})};
  const Tensor h = lstm_direction(Tensor({2, 1}, {1.0f, -2.0f}), 2, p, false);
  double hp = 0, cp = 0;
  const double xs[] = {1.0, -2.0};
  for (int t = 0; t < 2; ++t) {
    const double i = sigmoid(xs[t] + 0.5 * hp), f = sigmoid(xs[t] - 0.5 * hp + 0.1);
    const double g = std::tanh(xs[t] + 0.25 * hp), o = sigmoid(xs[t] + hp);
    cp = f * cp + i * g;
    hp = o * std::tanh(cp);
    EXPECT_NEAR(h.at(t), hp, 1e-6) << t;
  }
}

TEST(BiLstm, ShapeContract) {
  Rng rng(3);
  const LstmParams p{random_direction(8, 16, rng), random_direction(8, 16, rng), 16};
  EXPECT_EQ(bilstm_encode(random_tensor({4, 8}, rng), 4, p).shape(), (Shape{4, 32}));
}

TEST(BiLstm, ZeroWeightsGiveZeroOutput) {
  Rng rng(4);
  const LstmDirection zero{Tensor::zeros({5, 12}), Tensor::zeros({3, 12}), Tensor::zeros({12})};
  const Tensor out = bilstm_encode(random_tensor({4, 5}, rng), 4, LstmParams{zero, zero, 3});
  for (float x : out.values()) EXPECT_EQ(x, 0.0f);
}

TEST(BiLstm, ReversalSwapsDirections) {
  Rng rng(5);
  const LstmDirection d = random_direction(4, 3, rng);
  const LstmParams p{d, d, 3};
  const Tensor x = random_tensor({5, 4}, rng);
  std::vector<float> rev;
  for (std::size_t r = 5; r-- > 0;) {
    for (std::size_t c = 0; c < 4; ++c) rev.push_back(x.at(r, c));
  }
  const Tensor a = bilstm_encode(x, 5, p);
  const Tensor b = bilstm_encode(Tensor({5, 4}, rev), 5, p);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_NEAR(a.at(i, c), b.at(4 - i, 3 + c), 1e-6);
      EXPECT_NEAR(a.at(i, 3 + c), b.at(4 - i, c), 1e-6);
    }
  }
}

TEST(BiLstm, PaddingIsZeroAndInvisible) {
  Rng rng(6);
  const LstmParams p{random_direction(4, 3, rng), random_direction(4, 3, rng), 3};
  Tensor x = random_tensor({6, 4}, rng);
  const Tensor a = bilstm_encode(x, 3, p);
  for (std::size_t r = 3; r < 6; ++r) {
    for (std::size_t c = 0; c < 6; ++c) EXPECT_EQ(a.at(r, c), 0.0f);
  }
  // Changing padded inputs changes nothing, including the backward pass start.
  for (std::size_t i = 12; i < 24; ++i) x.values()[i] = 9.0f;
  const Tensor b = bilstm_encode(x, 3, p);
  for (std::size_t i = 0; i < a.numel(); ++i) EXPECT_EQ(a.at(i), b.at(i));
}

TEST(BiLstm, HiddenStatesBounded) {
  Rng rng(7);
  const LstmParams p{random_direction(4, 5, rng), random_direction(4, 5, rng), 5};
  const Tensor x = random_tensor({20, 4}, rng, false, -10, 10);
  const Tensor h = bilstm_encode(x, 20, p);
  for (float v : h.values()) EXPECT_LE(std::fabs(v), 1.0f);
}

TEST(TextEncoder, GradientThroughFullEncoder) {
  Rng rng(8);
  const std::int32_t ids[] = {2, 0, 4, 1};  // three tokens, then PAD
  const std::vector<Tensor> in{random_tensor({5, 4}, rng),         random_tensor({4, 12}, rng),
                               random_tensor({3, 12}, rng),        random_tensor({12}, rng),
                               random_tensor({4, 12}, rng),        random_tensor({3, 12}, rng),
                               random_tensor({12}, rng)};
  const Tensor w = random_tensor({4, 6}, rng, false);
  const auto f = [&](const std::vector<Tensor>& t) {
    const LstmParams p{{t[1], t[2], t[3]}, {t[4], t[5], t[6]}, 3};
    return sum(mul(bilstm_encode(embed_words(ids, t[0]), 3, p), w));
  };
  EXPECT_LE(testing::op_gradient_error(f, in, 4), 1e-3);
}

TEST(TextEncoder, ParametersAndPretrained) {
  ModelParams params;
  Rng rng(9);
  TextEncoder enc(params, 5, 3, 2, rng);
  EXPECT_EQ(enc.word_dim(), 3u);
  EXPECT_EQ(enc.hidden(), 2u);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(enc.word_embeddings().at(Vocabulary::kPad, c), 0.0f);
  for (const char* name : {"text.word_emb", "text.lstm_fwd.w_ih", "text.lstm_fwd.w_hh", "text.lstm_fwd.bias",
                           "text.lstm_bwd.w_ih", "text.lstm_bwd.w_hh", "text.lstm_bwd.bias"}) {
    EXPECT_TRUE(params.contains(name)) << name;
  }
  const Vocabulary vocab({"<mask>", "<pad>", "gear", "shaft", "motor"});
  PretrainedVectors pv;
  pv.dim = 3;
  pv.vectors["shaft"] = {1, 2, 3};
  pv.vectors["unseen"] = {4, 5, 6};
  pv.vectors["<pad>"] = {7, 8, 9};
  EXPECT_EQ(enc.load_pretrained(pv, vocab), 1u);
  EXPECT_EQ(enc.word_embeddings().at(3, 1), 2.0f);
  EXPECT_EQ(enc.word_embeddings().at(Vocabulary::kPad, 0), 0.0f);
  pv.dim = 4;
  EXPECT_THROW(enc.load_pretrained(pv, vocab), ConfigError);

  const std::int32_t tokens[] = {2, 3, 1, 1};
  const Tensor v = enc.encode(tokens, 2, ForwardContext::eval());
  EXPECT_EQ(v.shape(), (Shape{4, 4}));
  EXPECT_THROW(enc.encode(std::span<const std::int32_t>{}, 0, ForwardContext::eval()), DimensionError);
}

}  // namespace
}  // namespace patcls
