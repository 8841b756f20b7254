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
#include <string>

#include "patcls/ops.hpp"
#include "patcls/params.hpp"
#include "patcls/rng.hpp"

namespace patcls {

// Per-pass state: train/eval mode and the dropout stream.
struct ForwardContext {
  bool training = false;
  float dropout_rate = 0.0f;
  Rng* rng = nullptr;

  static ForwardContext eval() { return {}; }

  Tensor drop(const Tensor& x) const {
    if (!training || rng == nullptr) return x;
    return dropout(x, dropout_rate, *rng, true);
  }
};

// Two-layer perceptron: out = W2 * drop(relu(W1 * x + b1)) + b2, row-wise.
struct Mlp2 {
  Tensor w1, b1, w2, b2;

  static Mlp2 create(ModelParams& params, const std::string& prefix, std::size_t in, std::size_t hidden,
                     std::size_t out, Rng& rng);

  std::size_t in_width() const { return w1.rows(); }
  std::size_t out_width() const { return w2.cols(); }

  Tensor operator()(const Tensor& x, const ForwardContext& ctx) const {
    return linear(ctx.drop(relu(linear(x, w1, b1))), w2, b2);
  }
};

inline Mlp2 Mlp2::create(ModelParams& params, const std::string& prefix, std::size_t in, std::size_t hidden,
                         std::size_t out, Rng& rng) {
  Mlp2 m;
  m.w1 = params.add_uniform(prefix + ".w1", {in, hidden}, in, rng);
  m.b1 = params.add_uniform(prefix + ".b1", {hidden}, in, rng);
  m.w2 = params.add_uniform(prefix + ".w2", {hidden, out}, hidden, rng);
  m.b2 = params.add_uniform(prefix + ".b2", {out}, hidden, rng);
  return m;
}

}  // namespace patcls
