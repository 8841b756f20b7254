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

#include "patcls/history.hpp"

#include <cmath>
#include <string>

#include "patcls/errors.hpp"

namespace patcls {

PatentGraph band_graph(std::size_t nodes, std::size_t window) {
  if (window == 0) throw ConfigError("sliding window must be at least 1");
  std::vector<float> a(nodes * nodes, 0.0f);
  for (std::size_t r = 0; r < nodes; ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      if (r - c < window) a[r * nodes + c] = 1.0f / static_cast<float>(r - c + 1);
    }
  }
  return PatentGraph{nodes, window, Tensor({nodes, nodes}, std::move(a))};
}

std::optional<PatentGraph> build_patent_graph(std::span<const PatentRecord* const> history, std::size_t d_max,
                                              std::size_t window) {
  if (history.size() > d_max) {
    throw ContractError("history of " + std::to_string(history.size()) + " patents exceeds D = " +
                        std::to_string(d_max));
  }
  if (history.empty()) return std::nullopt;
  return band_graph(history.size(), window);
}

Tensor positional_table(std::size_t rows, std::size_t width, double base) {
  if (width % 2 != 0) throw ConfigError("positional encoding needs an even width, got " + std::to_string(width));
  std::vector<float> pe(rows * width);
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < width / 2; ++i) {
      const double angle =
          static_cast<double>(k) / std::pow(base, static_cast<double>(2 * i) / static_cast<double>(width));
      pe[k * width + 2 * i] = static_cast<float>(std::sin(angle));
      pe[k * width + 2 * i + 1] = static_cast<float>(std::cos(angle));
    }
  }
  return Tensor({rows, width}, std::move(pe));
}

Tensor positional_encode(const Tensor& x, double base, bool enabled) {
  const std::size_t rows = x.rows(), width = x.cols();
  const Tensor pe = enabled ? positional_table(rows, width, base) : Tensor::zeros({rows, width});
  if (!enabled && width % 2 != 0) {
    throw ConfigError("positional encoding needs an even width, got " + std::to_string(width));
  }
  const Tensor parts[] = {x, pe};
  return concat_cols(parts);
}

Tensor gcn_forward(const PatentGraph& g, const Tensor& h0, std::span<const Tensor> weights) {
  if (weights.empty()) throw ConfigError("GCN stack needs at least one layer");
  if (h0.rows() != g.nodes) {
    throw DimensionError("gcn: " + std::to_string(h0.rows()) + " feature rows for a graph of " +
                         std::to_string(g.nodes) + " nodes");
  }
  Tensor h = h0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].rows() != h.cols()) {
      throw DimensionError("gcn layer " + std::to_string(i + 1) + ": input width " + std::to_string(h.cols()) +
                           " does not match weight " + to_string(weights[i].shape()));
    }
    h = relu(matmul(matmul(g.adjacency, h), weights[i]));
  }
  return h;
}

Tensor readout_fuse(const Tensor& h_text, const Tensor& h_label) {
  if (!h_text.defined() && !h_label.defined()) throw ContractError("readout_fuse: both channels missing");
  if (h_text.defined() && h_label.defined() && h_text.shape() != h_label.shape()) {
    throw DimensionError("readout_fuse: text " + to_string(h_text.shape()) + " vs label " +
                         to_string(h_label.shape()));
  }
  const std::size_t width = h_text.defined() ? h_text.cols() : h_label.cols();
  const Tensor parts[] = {h_label.defined() ? mean_rows(h_label) : Tensor::zeros({width}),
                          h_text.defined() ? mean_rows(h_text) : Tensor::zeros({width})};
  return concat_cols(parts);
}

HistoryEncoder::HistoryEncoder(ModelParams& params, std::size_t num_codes, std::size_t word_dim,
                               std::size_t hidden, HistoryOptions opts, Rng& rng)
    : opts_(opts), num_codes_(num_codes), hidden_(hidden) {
  if (opts_.layers == 0) throw ConfigError("history needs at least one GCN layer");
  if (opts_.d_max == 0 || opts_.window == 0) throw ConfigError("history window sizes must be positive");
  if (!opts_.use_text && !opts_.use_label) throw ConfigError("history enabled with both channels off");
  auto stack = [&](const std::string& prefix, std::size_t in) {
    std::vector<Tensor> layers;
    for (std::size_t i = 0; i < opts_.layers; ++i) {
      const std::size_t fan = i == 0 ? in : hidden;
      layers.push_back(params.add_uniform(prefix + ".W" + std::to_string(i + 1), {fan, hidden}, fan, rng));
    }
    return layers;
  };
  if (opts_.use_text) {
    if (word_dim % 2 != 0) throw ConfigError("history text channel needs an even word width");
    text_layers_ = stack("hist.text", 2 * word_dim);
  }
  if (opts_.use_label) {
    label_proj_ = params.add_uniform("hist.label_proj", {num_codes, 2 * hidden}, 1, rng);
    label_layers_ = stack("hist.label", 4 * hidden);
  }
}

Tensor HistoryEncoder::text_features(std::span<const PatentRecord* const> history, const Tensor& word_emb) const {
  const std::size_t d = history.size();
  std::vector<std::int32_t> ids;
  std::vector<float> avg;
  std::vector<std::size_t> counts(d);
  for (std::size_t r = 0; r < d; ++r) {
    const PatentRecord& p = *history[r];
    if (p.tokens.size() < p.valid_len) throw ContractError("patent '" + p.id + "' is not encoded");
    ids.insert(ids.end(), p.tokens.begin(), p.tokens.begin() + static_cast<std::ptrdiff_t>(p.valid_len));
    counts[r] = p.valid_len;
  }
  avg.assign(d * ids.size(), 0.0f);
  std::size_t col = 0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t j = 0; j < counts[r]; ++j, ++col) {
      avg[r * ids.size() + col] = 1.0f / static_cast<float>(counts[r]);
    }
  }
  if (ids.empty()) return Tensor::zeros({d, word_emb.cols()});
  return matmul(Tensor({d, ids.size()}, std::move(avg)), gather_rows(word_emb, ids, Vocabulary::kPad));
}

Tensor HistoryEncoder::label_features(std::span<const PatentRecord* const> history) const {
  if (!label_proj_.defined()) throw ContractError("label channel is disabled");
  const std::size_t d = history.size();
  std::vector<float> multi_hot(d * num_codes_, 0.0f);
  for (std::size_t r = 0; r < d; ++r) {
    for (int c : history[r]->labels(opts_.level)) {
      multi_hot[r * num_codes_ + static_cast<std::size_t>(c)] = 1.0f;
    }
  }
  return matmul(Tensor({d, num_codes_}, std::move(multi_hot)), label_proj_);
}

Tensor HistoryEncoder::forward(std::span<const PatentRecord* const> history, const Tensor& word_emb) const {
  const auto graph = build_patent_graph(history, opts_.d_max, opts_.window);
  if (!graph) return Tensor::zeros({output_width()});
  Tensor h_text, h_label;
  if (opts_.use_text) {
    h_text = gcn_forward(*graph, positional_encode(text_features(history, word_emb), 10000.0, opts_.use_pe),
                         text_layers_);
  }
  if (opts_.use_label) {
    h_label = gcn_forward(*graph, positional_encode(label_features(history), 10000.0, opts_.use_pe),
                          label_layers_);
  }
  return readout_fuse(h_text, h_label);
}

}  // namespace patcls
