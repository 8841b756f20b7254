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

#include "patcls/text_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "patcls/errors.hpp"
#include "patcls/kernels.hpp"

namespace patcls {
namespace {

float sigmoidf(float x) { return 1.0f / (1.0f + std::exp(-x)); }

}  // namespace

Tensor embed_words(std::span<const std::int32_t> tokens, const Tensor& table) {
  return gather_rows(table, tokens, Vocabulary::kPad);
}

Tensor lstm_direction(const Tensor& x, std::size_t valid_len, const LstmDirection& p, bool reverse) {
  const std::size_t n = x.rows(), in = x.cols();
  const std::size_t hid = p.w_hh.rows(), g4 = 4 * hid;
  if (p.w_ih.rows() != in || p.w_ih.cols() != g4 || p.w_hh.cols() != g4 || p.bias.numel() != g4) {
    throw DimensionError("lstm: input " + to_string(x.shape()) + " with w_ih " + to_string(p.w_ih.shape()) +
                         ", w_hh " + to_string(p.w_hh.shape()) + ", bias " + to_string(p.bias.shape()));
  }
  if (valid_len > n) throw DimensionError("lstm: valid_len exceeds sequence length");
  const std::size_t len = valid_len;
  auto pos = [reverse, len](std::size_t t) { return reverse ? len - 1 - t : t; };
  const kernels::KernelTable& k = kernels::active();

  std::vector<float> h_out(n * hid, 0.0f);
  // Saved per step t: activated gates, cell state, tanh(cell).
  std::vector<float> gates(len * g4), cell(len * hid), tcell(len * hid);
  std::vector<float> pre(g4);
  const float* wih = p.w_ih.data();
  const float* whh = p.w_hh.data();
  for (std::size_t t = 0; t < len; ++t) {
    std::copy_n(p.bias.data(), g4, pre.data());
    const float* xr = x.data() + pos(t) * in;
    for (std::size_t j = 0; j < in; ++j) {
      if (xr[j] != 0.0f) k.axpy(xr[j], wih + j * g4, pre.data(), g4);
    }
    if (t > 0) {
      const float* hp = h_out.data() + pos(t - 1) * hid;
      for (std::size_t j = 0; j < hid; ++j) {
        if (hp[j] != 0.0f) k.axpy(hp[j], whh + j * g4, pre.data(), g4);
      }
    }
    float* gt = gates.data() + t * g4;
    for (std::size_t j = 0; j < hid; ++j) {
      gt[j] = sigmoidf(pre[j]);
      gt[hid + j] = sigmoidf(pre[hid + j]);
      gt[2 * hid + j] = std::tanh(pre[2 * hid + j]);
      gt[3 * hid + j] = sigmoidf(pre[3 * hid + j]);
      const float c_prev = t > 0 ? cell[(t - 1) * hid + j] : 0.0f;
      const float c = gt[hid + j] * c_prev + gt[j] * gt[2 * hid + j];
      cell[t * hid + j] = c;
      tcell[t * hid + j] = std::tanh(c);
      h_out[pos(t) * hid + j] = gt[3 * hid + j] * tcell[t * hid + j];
    }
  }

  return Tensor::make_result(
      {n, hid}, std::move(h_out), {x, p.w_ih, p.w_hh, p.bias}, "lstm",
      [len, in, hid, g4, reverse, gates = std::move(gates), cell = std::move(cell),
       tcell = std::move(tcell)](const detail::Node& out) {
        auto pos = [reverse, len](std::size_t t) { return reverse ? len - 1 - t : t; };
        const kernels::KernelTable& k = kernels::active();
        auto grad_of = [&out](std::size_t i) -> std::span<float> {
          detail::Node& node = *out.inputs[i];
          return node.requires_grad ? node.grad_buffer() : std::span<float>{};
        };
        const std::span<float> gx = grad_of(0), gwih = grad_of(1), gwhh = grad_of(2), gb = grad_of(3);
        const float* xv = out.inputs[0]->value.data();
        const float* wih = out.inputs[1]->value.data();
        const float* whh = out.inputs[2]->value.data();
        const float* hv = out.value.data();
        std::vector<float> dh_next(hid, 0.0f), dc_next(hid, 0.0f), dpre(g4);
        for (std::size_t t = len; t-- > 0;) {
          const float* gt = gates.data() + t * g4;
          const float* dy = out.grad.data() + pos(t) * hid;
          for (std::size_t j = 0; j < hid; ++j) {
            const float ig = gt[j], fg = gt[hid + j], cg = gt[2 * hid + j], og = gt[3 * hid + j];
            const float tc = tcell[t * hid + j];
            const float dh = dy[j] + dh_next[j];
            const float dc = dh * og * (1.0f - tc * tc) + dc_next[j];
            const float c_prev = t > 0 ? cell[(t - 1) * hid + j] : 0.0f;
            dpre[j] = dc * cg * ig * (1.0f - ig);
            dpre[hid + j] = dc * c_prev * fg * (1.0f - fg);
            dpre[2 * hid + j] = dc * ig * (1.0f - cg * cg);
            dpre[3 * hid + j] = dh * tc * og * (1.0f - og);
            dc_next[j] = dc * fg;
          }
          const float* xr = xv + pos(t) * in;
          if (!gb.empty()) k.axpy(1.0f, dpre.data(), gb.data(), g4);
          if (!gwih.empty()) {
            for (std::size_t j = 0; j < in; ++j) {
              if (xr[j] != 0.0f) k.axpy(xr[j], dpre.data(), gwih.data() + j * g4, g4);
            }
          }
          if (!gx.empty()) {
            float* dx = gx.data() + pos(t) * in;
            for (std::size_t j = 0; j < in; ++j) dx[j] += k.dot(wih + j * g4, dpre.data(), g4);
          }
          if (t > 0) {
            const float* hp = hv + pos(t - 1) * hid;
            if (!gwhh.empty()) {
              for (std::size_t j = 0; j < hid; ++j) {
                if (hp[j] != 0.0f) k.axpy(hp[j], dpre.data(), gwhh.data() + j * g4, g4);
              }
            }
            for (std::size_t j = 0; j < hid; ++j) dh_next[j] = k.dot(whh + j * g4, dpre.data(), g4);
          }
        }
      });
}

Tensor bilstm_encode(const Tensor& x, std::size_t valid_len, const LstmParams& p) {
  const Tensor parts[] = {lstm_direction(x, valid_len, p.forward, false),
                          lstm_direction(x, valid_len, p.backward, true)};
  return concat_cols(parts);
}

TextEncoder::TextEncoder(ModelParams& params, std::size_t vocab_size, std::size_t word_dim, std::size_t hidden,
                         Rng& rng) {
  if (vocab_size < 2) throw ConfigError("vocabulary must contain at least the MASK and PAD tokens");
  if (word_dim == 0 || hidden == 0) throw ConfigError("word and hidden widths must be positive");
  words_ = params.add_uniform("text.word_emb", {vocab_size, word_dim}, 1, rng);
  // PAD never reaches the encoder, but keep its stored row at zero too.
  std::fill_n(words_.data() + Vocabulary::kPad * word_dim, word_dim, 0.0f);
  lstm_.hidden = hidden;
  auto make = [&](const std::string& prefix) {
    LstmDirection d;
    d.w_ih = params.add_uniform(prefix + ".w_ih", {word_dim, 4 * hidden}, hidden, rng);
    d.w_hh = params.add_uniform(prefix + ".w_hh", {hidden, 4 * hidden}, hidden, rng);
    d.bias = params.add_uniform(prefix + ".bias", {4 * hidden}, hidden, rng);
    return d;
  };
  lstm_.forward = make("text.lstm_fwd");
  lstm_.backward = make("text.lstm_bwd");
}

Tensor TextEncoder::encode(std::span<const std::int32_t> tokens, std::size_t valid_len,
                           const ForwardContext& ctx) const {
  if (tokens.empty()) throw DimensionError("text encoder: empty token sequence");
  return ctx.drop(bilstm_encode(embed_words(tokens, words_), valid_len, lstm_));
}

std::size_t TextEncoder::load_pretrained(const PretrainedVectors& vectors, const Vocabulary& vocab) {
  if (vectors.vectors.empty()) return 0;
  if (vectors.dim != word_dim()) {
    throw ConfigError("pretrained vectors have width " + std::to_string(vectors.dim) + ", model expects " +
                      std::to_string(word_dim()));
  }
  std::size_t replaced = 0;
  for (const auto& [word, vec] : vectors.vectors) {
    const auto id = vocab.find(word);
    if (!id || *id == Vocabulary::kPad) continue;
    std::copy(vec.begin(), vec.end(), words_.data() + static_cast<std::size_t>(*id) * word_dim());
    ++replaced;
  }
  return replaced;
}

}  // namespace patcls
