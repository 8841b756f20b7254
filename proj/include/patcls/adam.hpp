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

#include <cstdint>
#include <vector>

#include "patcls/params.hpp"

namespace patcls {

// Adam with bias correction. Moment buffers follow the parameter order of
// the ModelParams they were created for.
struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<float>> first_moment;
  std::vector<std::vector<float>> second_moment;

  static AdamState for_params(const ModelParams& params, double lr);
};

// One update of every parameter from its accumulated gradient; gradients are
// zeroed afterwards. A parameter that never received a gradient buffer is a
// contract violation.
void adam_step(const ModelParams& params, AdamState& state);

}  // namespace patcls
