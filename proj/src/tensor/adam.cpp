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

#include "patcls/adam.hpp"

#include <cmath>

#include "patcls/errors.hpp"

namespace patcls {

AdamState AdamState::for_params(const ModelParams& params, double lr) {
  AdamState s;
  s.lr = lr;
  for (const auto& e : params) {
    s.first_moment.emplace_back(e.tensor.numel(), 0.0f);
    s.second_moment.emplace_back(e.tensor.numel(), 0.0f);
  }
  return s;
}

void adam_step(const ModelParams& params, AdamState& state) {
  if (state.first_moment.size() != params.size()) {
    throw ContractError("Adam state holds " + std::to_string(state.first_moment.size()) +
                        " buffers for " + std::to_string(params.size()) + " parameters");
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  const float b1 = static_cast<float>(state.beta1);
  const float b2 = static_cast<float>(state.beta2);

  std::size_t k = 0;
  for (const auto& e : params) {
    Tensor param = e.tensor;
    auto value = param.values();
    // A parameter the batch never touched has no buffer yet; it takes a
    // zero-gradient step so the moments still decay.
    auto grad = param.grad_buffer();
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    if (m.size() != value.size()) {
      throw ContractError("Adam moment shape mismatch for parameter '" + e.name + "'");
    }
    for (std::size_t i = 0; i < value.size(); ++i) {
      const float g = grad[i];
      m[i] = b1 * m[i] + (1.0f - b1) * g;
      v[i] = b2 * v[i] + (1.0f - b2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      value[i] -= static_cast<float>(state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon));
      grad[i] = 0.0f;
    }
    ++k;
  }
}

}  // namespace patcls
