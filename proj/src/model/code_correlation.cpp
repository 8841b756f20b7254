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

#include "patcls/code_correlation.hpp"

#include <string>

#include "patcls/errors.hpp"

namespace patcls {

std::string_view icl_mode_name(IclMode mode) {
  switch (mode) {
    case IclMode::kNone: return "none";
    case IclMode::kFixed: return "fixed";
    case IclMode::kAdaptiveH: return "adaptive_h";
    case IclMode::kAdaptiveV: return "adaptive_v";
    case IclMode::kAdaptiveHV: return "adaptive_hv";
  }
  return "?";
}

IclMode parse_icl_mode(std::string_view name) {
  for (IclMode m : {IclMode::kNone, IclMode::kFixed, IclMode::kAdaptiveH, IclMode::kAdaptiveV, IclMode::kAdaptiveHV}) {
    if (icl_mode_name(m) == name) return m;
  }
  throw ConfigError("unknown icl mode '" + std::string(name) + "'");
}

Tensor adaptive_propagate(const CodeEmbeddings& emb, const Taxonomy& tax, int level, Direction dir,
                          Weighting weighting, bool include_self) {
  if (level < 1 || level > tax.depth()) throw LookupError("no taxonomy level " + std::to_string(level));
  const Tensor& own = emb.level(level);
  const std::size_t n = tax.size(level);

  // Candidate rows: same level for horizontal; parent level stacked over
  // child level for vertical.
  std::vector<Tensor> blocks;
  std::size_t parent_rows = 0;
  if (dir == Direction::kHorizontal) {
    blocks.push_back(own);
  } else {
    if (level > 1) {
      blocks.push_back(emb.level(level - 1));
      parent_rows = tax.size(level - 1);
    }
    if (level < tax.depth()) blocks.push_back(emb.level(level + 1));
  }
  if (blocks.empty()) return Tensor::zeros({n, own.cols()});
  const Tensor candidates = blocks.size() == 1 ? blocks[0] : concat_rows(blocks);
  const std::size_t m = candidates.rows();

  std::vector<std::uint8_t> mask(n * m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const NeighborSets sets = neighbor_sets(tax, level, static_cast<int>(i), include_self);
    for (const CodeRef& r : dir == Direction::kHorizontal ? sets.horizontal : sets.vertical) {
      const std::size_t col = dir == Direction::kHorizontal ? static_cast<std::size_t>(r.index)
                              : r.level < level                ? static_cast<std::size_t>(r.index)
                                                               : parent_rows + static_cast<std::size_t>(r.index);
      mask[i * m + col] = 1;
    }
  }

  if (weighting == Weighting::kUniform) {
    std::vector<float> w(n * m, 0.0f);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t count = 0;
      for (std::size_t j = 0; j < m; ++j) count += mask[i * m + j];
      for (std::size_t j = 0; j < m && count; ++j) {
        if (mask[i * m + j]) w[i * m + j] = 1.0f / static_cast<float>(count);
      }
    }
    return matmul(Tensor({n, m}, std::move(w)), candidates);
  }
  const Tensor weights = masked_softmax_rows(matmul_nt(own, candidates), mask);
  return matmul(weights, candidates);
}

Tensor fuse_hv(const Tensor& h_msg, const Tensor& v_msg, const Mlp2& fuse, const ForwardContext& ctx) {
  if (h_msg.shape() != v_msg.shape()) {
    throw DimensionError("fuse_hv: horizontal " + to_string(h_msg.shape()) + " vs vertical " +
                         to_string(v_msg.shape()));
  }
  const Tensor parts[] = {v_msg, h_msg};
  return fuse(concat_cols(parts), ctx);
}

Tensor contextualize(const Taxonomy& tax, std::span<const Tensor> msgs, int level, const Mlp2& g,
                     const ForwardContext& ctx) {
  if (level < 1 || static_cast<std::size_t>(level) > msgs.size()) {
    throw ContractError("contextualize: level " + std::to_string(level) + " needs messages for levels 1.." +
                        std::to_string(level) + ", have " + std::to_string(msgs.size()));
  }
  const std::size_t n = tax.size(level);
  std::vector<Tensor> parts;
  for (int l = 1; l < level; ++l) {
    std::vector<std::int32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = tax.ancestor(level, static_cast<int>(i), l);
    parts.push_back(gather_rows(msgs[static_cast<std::size_t>(l - 1)], ids));
  }
  parts.push_back(msgs[static_cast<std::size_t>(level - 1)]);
  if (parts.back().rows() != n) {
    throw DimensionError("contextualize: level-" + std::to_string(level) + " messages have " +
                         std::to_string(parts.back().rows()) + " rows for " + std::to_string(n) + " codes");
  }
  return g(parts.size() == 1 ? parts[0] : concat_cols(parts), ctx);
}

CodeCorrelation::CodeCorrelation(ModelParams& params, const Taxonomy& tax, IclMode mode, int level,
                                 std::size_t width, bool include_self, Rng& rng)
    : tax_(&tax), mode_(mode), level_(level), include_self_(include_self) {
  if (mode == IclMode::kNone) throw ConfigError("CodeCorrelation built with icl mode 'none'");
  if (level < 1 || level > tax.depth()) throw ConfigError("classification level out of taxonomy range");
  // Embeddings for every level touched by propagation at levels 1..q.
  const int top = std::min(level + 1, tax.depth());
  for (int l = 1; l <= top; ++l) {
    emb_.levels.push_back(
        params.add_uniform("icl.E" + std::to_string(l), {tax.size(l), width}, 1, rng));
  }
  for (int l = 1; l <= level; ++l) {
    fuse_.push_back(Mlp2::create(params, "icl.fuse" + std::to_string(l), 2 * width, width, width, rng));
  }
  context_ = Mlp2::create(params, "icl.context" + std::to_string(level),
                          static_cast<std::size_t>(level) * width, width, width, rng);
}

std::vector<Tensor> CodeCorrelation::messages(const ForwardContext& ctx) const {
  std::vector<Tensor> msgs;
  for (int l = 1; l <= level_; ++l) {
    const Tensor& raw = emb_.level(l);
    Tensor h = raw, v = raw;
    switch (mode_) {
      case IclMode::kFixed:
        v = adaptive_propagate(emb_, *tax_, l, Direction::kVertical, Weighting::kUniform, include_self_);
        break;
      case IclMode::kAdaptiveH:
        h = adaptive_propagate(emb_, *tax_, l, Direction::kHorizontal, Weighting::kAdaptive, include_self_);
        break;
      case IclMode::kAdaptiveV:
        v = adaptive_propagate(emb_, *tax_, l, Direction::kVertical, Weighting::kAdaptive, include_self_);
        break;
      case IclMode::kAdaptiveHV:
        h = adaptive_propagate(emb_, *tax_, l, Direction::kHorizontal, Weighting::kAdaptive, include_self_);
        v = adaptive_propagate(emb_, *tax_, l, Direction::kVertical, Weighting::kAdaptive, include_self_);
        break;
      case IclMode::kNone: break;
    }
    msgs.push_back(fuse_hv(h, v, fuse_[static_cast<std::size_t>(l - 1)], ctx));
  }
  return msgs;
}

Tensor CodeCorrelation::forward(const ForwardContext& ctx) const {
  const std::vector<Tensor> msgs = messages(ctx);
  return contextualize(*tax_, msgs, level_, context_, ctx);
}

}  // namespace patcls
