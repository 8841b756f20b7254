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

#include <span>
#include <string_view>
#include <vector>

#include "patcls/nn.hpp"
#include "patcls/taxonomy.hpp"

namespace patcls {

// Which taxonomy-correlation variant a model runs.
//   none        - no code correlation; static code embeddings only
//   fixed       - uniform-weight vertical aggregation, raw horizontal
//   adaptive_h  - attention over siblings, raw vertical
//   adaptive_v  - attention over parent and children, raw horizontal
//   adaptive_hv - attention in both directions
enum class IclMode { kNone, kFixed, kAdaptiveH, kAdaptiveV, kAdaptiveHV };

std::string_view icl_mode_name(IclMode mode);
IclMode parse_icl_mode(std::string_view name);

enum class Direction { kHorizontal, kVertical };
enum class Weighting { kAdaptive, kUniform };

// Trainable E^l per level, all of the same width.
struct CodeEmbeddings {
  std::vector<Tensor> levels;  // levels[l - 1] : |C^l| x width
  const Tensor& level(int l) const { return levels.at(static_cast<std::size_t>(l - 1)); }
};

// Attention-weighted mix of each level-q code's neighbor set, with logits
// E^q_i . E_j over set members and a softmax restricted to the set. Uniform
// weighting replaces the softmax with the set mean. Codes with an empty set
// get a zero row.
Tensor adaptive_propagate(const CodeEmbeddings& emb, const Taxonomy& tax, int level, Direction dir,
                          Weighting weighting = Weighting::kAdaptive, bool include_self = true);

// Per-level fusion of vertical and horizontal messages: f([v ; h]).
Tensor fuse_hv(const Tensor& h_msg, const Tensor& v_msg, const Mlp2& fuse, const ForwardContext& ctx);

// Each level-q code's ancestor rows from msgs[0..q-2] concatenated with its
// own msgs[q-1] row, passed through g.
Tensor contextualize(const Taxonomy& tax, std::span<const Tensor> msgs, int level, const Mlp2& g,
                     const ForwardContext& ctx);

// The taxonomy-correlation block: produces hierarchical code representations
// for the classification level.
class CodeCorrelation {
 public:
  CodeCorrelation(ModelParams& params, const Taxonomy& tax, IclMode mode, int level, std::size_t width,
                  bool include_self, Rng& rng);

  IclMode mode() const { return mode_; }
  const CodeEmbeddings& embeddings() const { return emb_; }

  // Fused messages for levels 1..target level.
  std::vector<Tensor> messages(const ForwardContext& ctx) const;
  // Representations of the target-level codes, |C^q| x width.
  Tensor forward(const ForwardContext& ctx) const;

 private:
  const Taxonomy* tax_;
  IclMode mode_;
  int level_;
  bool include_self_;
  CodeEmbeddings emb_;
  std::vector<Mlp2> fuse_;  // one per level 1..q
  Mlp2 context_;            // g_q
};

}  // namespace patcls
