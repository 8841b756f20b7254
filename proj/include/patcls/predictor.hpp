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
#include <string_view>

#include "patcls/nn.hpp"

namespace patcls {

// Each code row attends over word positions [0, valid_len) of v:
// softmax(codes v^T) v. valid_len = 0 is a contract violation.
Tensor label_attention(const Tensor& codes, const Tensor& v, std::size_t valid_len);

// Attention weights alone, |C| x N, zero beyond valid_len.
Tensor label_attention_weights(const Tensor& codes, const Tensor& v, std::size_t valid_len);

struct DecoderParams {
  Mlp2 text;      // g_T : 4F -> 2F -> 1, per code row
  Mlp2 behavior;  // g_B : 2F -> 2F -> |C|
};

// Pre-sigmoid scores g_T(m_t) + g_B(m_b), width |C|.
Tensor predict_logits(const Tensor& m_t, const Tensor& m_b, const DecoderParams& dec, const ForwardContext& ctx);
// sigmoid(predict_logits(...)).
Tensor predict(const Tensor& m_t, const Tensor& m_b, const DecoderParams& dec, const ForwardContext& ctx);

enum class LossReduction { kSum, kMean };
std::string_view loss_reduction_name(LossReduction r);
LossReduction parse_loss_reduction(std::string_view name);

inline constexpr float kProbClamp = 1e-7f;

// Binary cross-entropy on probabilities clamped to [1e-7, 1 - 1e-7].
Tensor bce_loss(const Tensor& y_hat, std::span<const float> y, LossReduction reduction = LossReduction::kSum);

// Same value as bce_loss(sigmoid(z), y); the gradient w.r.t. z is exactly
// sigmoid(z) - y (times 1/n under mean reduction).
Tensor bce_with_logits(const Tensor& z, std::span<const float> y, LossReduction reduction = LossReduction::kSum);

class Predictor {
 public:
  Predictor(ModelParams& params, std::size_t num_codes, std::size_t hidden, Rng& rng);

  const Tensor& static_codes() const { return static_; }
  const DecoderParams& decoder() const { return dec_; }

  // M_T = [attention with `code_repr` ; attention with H^S]. An undefined
  // code_repr uses H^S for both passes.
  Tensor text_summary(const Tensor& v, std::size_t valid_len, const Tensor& code_repr) const;

  Tensor logits(const Tensor& v, std::size_t valid_len, const Tensor& code_repr, const Tensor& m_b,
                const ForwardContext& ctx) const;

 private:
  Tensor static_;  // H^S_q
  DecoderParams dec_;
};

}  // namespace patcls
