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

#include "patcls/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patcls/errors.hpp"

namespace patcls {
namespace {

void check_targets(const Tensor& x, std::span<const float> y, const char* op) {
  if (x.numel() != y.size()) {
    throw DimensionError(std::string(op) + ": " + std::to_string(y.size()) + " targets for prediction " +
                         to_string(x.shape()));
  }
}

double clamp_prob(double p) { return std::clamp(p, static_cast<double>(kProbClamp), 1.0 - kProbClamp); }

double bce_term(double p, double y) { return -(y * std::log(p) + (1.0 - y) * std::log1p(-p)); }

}  // namespace

Tensor label_attention_weights(const Tensor& codes, const Tensor& v, std::size_t valid_len) {
  if (codes.cols() != v.cols()) {
    throw DimensionError("label_attention: codes " + to_string(codes.shape()) + " vs words " + to_string(v.shape()));
  }
  if (valid_len == 0) throw ContractError("label_attention: no attendable words (valid_len = 0)");
  if (valid_len > v.rows()) throw DimensionError("label_attention: valid_len exceeds word rows");
  return masked_softmax_rows(matmul_nt(codes, v), valid_len);
}

Tensor label_attention(const Tensor& codes, const Tensor& v, std::size_t valid_len) {
  return matmul(label_attention_weights(codes, v, valid_len), v);
}

Tensor predict_logits(const Tensor& m_t, const Tensor& m_b, const DecoderParams& dec, const ForwardContext& ctx) {
  const std::size_t c = m_t.rows();
  if (m_t.cols() != dec.text.in_width()) {
    throw DimensionError("predict: M_T " + to_string(m_t.shape()) + " does not match g_T input width " +
                         std::to_string(dec.text.in_width()));
  }
  if (m_b.numel() != dec.behavior.in_width()) {
    throw DimensionError("predict: M_B " + to_string(m_b.shape()) + " does not match g_B input width " +
                         std::to_string(dec.behavior.in_width()));
  }
  if (dec.behavior.out_width() != c) {
    throw DimensionError("predict: g_B emits " + std::to_string(dec.behavior.out_width()) + " scores for " +
                         std::to_string(c) + " codes");
  }
  const Tensor text = reshape(dec.text(m_t, ctx), {c});
  const Tensor behavior = dec.behavior(reshape(m_b, {m_b.numel()}), ctx);
  return add(text, behavior);
}

Tensor predict(const Tensor& m_t, const Tensor& m_b, const DecoderParams& dec, const ForwardContext& ctx) {
  return sigmoid(predict_logits(m_t, m_b, dec, ctx));
}

std::string_view loss_reduction_name(LossReduction r) { return r == LossReduction::kSum ? "sum" : "mean"; }

LossReduction parse_loss_reduction(std::string_view name) {
  if (name == "sum") return LossReduction::kSum;
  if (name == "mean") return LossReduction::kMean;
  throw ConfigError("unknown loss reduction '" + std::string(name) + "' (expected sum or mean)");
}

Tensor bce_loss(const Tensor& y_hat, std::span<const float> y, LossReduction reduction) {
  check_targets(y_hat, y, "bce_loss");
  const std::size_t n = y.size();
  const float norm = reduction == LossReduction::kMean && n ? 1.0f / static_cast<float>(n) : 1.0f;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += bce_term(clamp_prob(y_hat.at(i)), y[i]);
  std::vector<float> targets(y.begin(), y.end());
  return Tensor::make_result({1}, {static_cast<float>(total * norm)}, {y_hat}, "bce_loss",
                             [targets = std::move(targets), norm](const detail::Node& out) {
                               detail::Node& in = *out.inputs[0];
                               if (!in.requires_grad) return;
                               auto g = in.grad_buffer();
                               const float dl = out.grad[0] * norm;
                               for (std::size_t i = 0; i < targets.size(); ++i) {
                                 const double p = clamp_prob(in.value[i]);
                                 const double t = targets[i];
                                 g[i] += static_cast<float>(dl * (-t / p + (1.0 - t) / (1.0 - p)));
                               }
                             });
}

Tensor bce_with_logits(const Tensor& z, std::span<const float> y, LossReduction reduction) {
  check_targets(z, y, "bce_with_logits");
  const std::size_t n = y.size();
  const float norm = reduction == LossReduction::kMean && n ? 1.0f / static_cast<float>(n) : 1.0f;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-static_cast<double>(z.at(i))));
    total += bce_term(clamp_prob(p), y[i]);
  }
  std::vector<float> targets(y.begin(), y.end());
  return Tensor::make_result({1}, {static_cast<float>(total * norm)}, {z}, "bce_with_logits",
                             [targets = std::move(targets), norm](const detail::Node& out) {
                               detail::Node& in = *out.inputs[0];
                               if (!in.requires_grad) return;
                               auto g = in.grad_buffer();
                               const double dl = static_cast<double>(out.grad[0]) * norm;
                               for (std::size_t i = 0; i < targets.size(); ++i) {
                                 const double p = 1.0 / (1.0 + std::exp(-static_cast<double>(in.value[i])));
                                 g[i] += static_cast<float>(dl * (p - targets[i]));
                               }
                             });
}

Predictor::Predictor(ModelParams& params, std::size_t num_codes, std::size_t hidden, Rng& rng) {
  static_ = params.add_uniform("pred.static_codes", {num_codes, 2 * hidden}, 1, rng);
  dec_.text = Mlp2::create(params, "pred.g_text", 4 * hidden, 2 * hidden, 1, rng);
  dec_.behavior = Mlp2::create(params, "pred.g_behavior", 2 * hidden, 2 * hidden, num_codes, rng);
}

Tensor Predictor::text_summary(const Tensor& v, std::size_t valid_len, const Tensor& code_repr) const {
  const Tensor parts[] = {label_attention(code_repr.defined() ? code_repr : static_, v, valid_len),
                          label_attention(static_, v, valid_len)};
  return concat_cols(parts);
}

Tensor Predictor::logits(const Tensor& v, std::size_t valid_len, const Tensor& code_repr, const Tensor& m_b,
                         const ForwardContext& ctx) const {
  return predict_logits(text_summary(v, valid_len, code_repr), m_b, dec_, ctx);
}

}  // namespace patcls
