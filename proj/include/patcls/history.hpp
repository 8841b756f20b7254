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
#include <optional>
#include <span>
#include <vector>

#include "patcls/corpus.hpp"
#include "patcls/nn.hpp"

namespace patcls {

// Sliding-window graph over an assignee's past patents, oldest first. Row r
// aggregates from itself and its s-1 predecessors:
//   adjacency[r][c] = 1 / (r - c + 1)  if 0 <= r - c < s, else 0.
struct PatentGraph {
  std::size_t nodes = 0;
  std::size_t window = 0;
  Tensor adjacency;  // nodes x nodes, constant
};

PatentGraph band_graph(std::size_t nodes, std::size_t window);

// nullopt for an empty history. Histories longer than d_max are a contract
// violation; callers pass the latest d_max records.
std::optional<PatentGraph> build_patent_graph(std::span<const PatentRecord* const> history, std::size_t d_max,
                                              std::size_t window);

// PE(k, 2i) = sin(k / base^(2i/d)), PE(k, 2i+1) = cos(k / base^(2i/d)).
Tensor positional_table(std::size_t rows, std::size_t width, double base = 10000.0);

// [x ; PE] with width 2d. With `enabled` false the PE half is zeros.
Tensor positional_encode(const Tensor& x, double base = 10000.0, bool enabled = true);

// I layers of ReLU(A H W).
Tensor gcn_forward(const PatentGraph& g, const Tensor& h0, std::span<const Tensor> weights);

// [mean rows of h_label ; mean rows of h_text]; either may be undefined and
// then contributes zeros of the other's width.
Tensor readout_fuse(const Tensor& h_text, const Tensor& h_label);

struct HistoryOptions {
  int level = 3;
  std::size_t d_max = 10;
  std::size_t window = 4;
  std::size_t layers = 2;
  bool use_pe = true;
  bool use_text = true;
  bool use_label = true;
};

class HistoryEncoder {
 public:
  HistoryEncoder(ModelParams& params, std::size_t num_codes, std::size_t word_dim, std::size_t hidden,
                 HistoryOptions opts, Rng& rng);

  const HistoryOptions& options() const { return opts_; }
  std::size_t output_width() const { return 2 * hidden_; }

  // Mean of each patent's non-PAD word embeddings, |history| x T.
  Tensor text_features(std::span<const PatentRecord* const> history, const Tensor& word_emb) const;
  // Multi-hot level-q codes times W_B, |history| x 2F.
  Tensor label_features(std::span<const PatentRecord* const> history) const;

  // Behavior vector M_B of width 2F; zeros for an empty history.
  Tensor forward(std::span<const PatentRecord* const> history, const Tensor& word_emb) const;

 private:
  HistoryOptions opts_;
  std::size_t num_codes_;
  std::size_t hidden_;
  Tensor label_proj_;  // W_B
  std::vector<Tensor> text_layers_;
  std::vector<Tensor> label_layers_;
};

}  // namespace patcls
