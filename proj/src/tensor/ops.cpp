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

#include "patcls/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "patcls/errors.hpp"
#include "patcls/kernels.hpp"

namespace patcls {
namespace {

using detail::Node;

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " +
                         to_string(b.shape()));
  }
}

// Gradient span of input i, or empty when it does not need one.
std::span<float> input_grad(const Node& out, std::size_t i) {
  Node& in = *out.inputs[i];
  if (!in.requires_grad) return {};
  return in.grad_buffer();
}

const std::vector<float>& input_value(const Node& out, std::size_t i) {
  return out.inputs[i]->value;
}

Shape matrix_shape(std::size_t m, std::size_t n) { return {m, n}; }

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw DimensionError("matmul: inner dimensions disagree " + to_string(a.shape()) + " x " +
                         to_string(b.shape()));
  }
  std::vector<float> c(m * n, 0.0f);
  kernels::gemm_nn(a.data(), b.data(), c.data(), m, k, n);
  return Tensor::make_result(matrix_shape(m, n), std::move(c), {a, b}, "matmul",
                             [m, k, n](const Node& out) {
                               const float* dc = out.grad.data();
                               if (auto ga = input_grad(out, 0); !ga.empty()) {
                                 kernels::gemm_nt(dc, input_value(out, 1).data(), ga.data(), m, n, k);
                               }
                               if (auto gb = input_grad(out, 1); !gb.empty()) {
                                 kernels::gemm_tn(input_value(out, 0).data(), dc, gb.data(), k, m, n);
                               }
                             });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  if (b.cols() != k) {
    throw DimensionError("matmul_nt: inner dimensions disagree " + to_string(a.shape()) +
                         " x " + to_string(b.shape()) + "^T");
  }
  std::vector<float> c(m * n, 0.0f);
  kernels::gemm_nt(a.data(), b.data(), c.data(), m, k, n);
  return Tensor::make_result(matrix_shape(m, n), std::move(c), {a, b}, "matmul_nt",
                             [m, k, n](const Node& out) {
                               const float* dc = out.grad.data();
                               if (auto ga = input_grad(out, 0); !ga.empty()) {
                                 kernels::gemm_nn(dc, input_value(out, 1).data(), ga.data(), m, n, k);
                               }
                               if (auto gb = input_grad(out, 1); !gb.empty()) {
                                 kernels::gemm_tn(dc, input_value(out, 0).data(), gb.data(), n, m, k);
                               }
                             });
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& bias) {
  const std::size_t m = x.rows(), k = x.cols(), n = w.cols();
  if (w.rows() != k) {
    throw DimensionError("linear: input " + to_string(x.shape()) + " does not match weight " +
                         to_string(w.shape()));
  }
  const bool has_bias = bias.defined();
  if (has_bias && bias.numel() != n) {
    throw DimensionError("linear: bias " + to_string(bias.shape()) + " does not match weight " +
                         to_string(w.shape()));
  }
  std::vector<float> c(m * n, 0.0f);
  if (has_bias) {
    for (std::size_t i = 0; i < m; ++i) std::copy_n(bias.data(), n, c.data() + i * n);
  }
  kernels::gemm_nn(x.data(), w.data(), c.data(), m, k, n);
  std::vector<Tensor> inputs{x, w};
  if (has_bias) inputs.push_back(bias);
  Shape shape = x.rank() == 1 ? Shape{n} : matrix_shape(m, n);
  return Tensor::make_result(std::move(shape), std::move(c), std::move(inputs), "linear",
                             [m, k, n, has_bias](const Node& out) {
                               const float* dc = out.grad.data();
                               if (auto gx = input_grad(out, 0); !gx.empty()) {
                                 kernels::gemm_nt(dc, input_value(out, 1).data(), gx.data(), m, n, k);
                               }
                               if (auto gw = input_grad(out, 1); !gw.empty()) {
                                 kernels::gemm_tn(input_value(out, 0).data(), dc, gw.data(), k, m, n);
                               }
                               if (!has_bias) return;
                               if (auto gb = input_grad(out, 2); !gb.empty()) {
                                 const auto& kt = kernels::active();
                                 for (std::size_t i = 0; i < m; ++i) kt.axpy(1.0f, dc + i * n, gb.data(), n);
                               }
                             });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<float> c(a.numel());
  kernels::active().add(a.data(), b.data(), c.data(), c.size());
  return Tensor::make_result(a.shape(), std::move(c), {a, b}, "add", [](const Node& out) {
    const auto& kt = kernels::active();
    for (std::size_t i = 0; i < 2; ++i) {
      if (auto g = input_grad(out, i); !g.empty()) kt.axpy(1.0f, out.grad.data(), g.data(), g.size());
    }
  });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  const std::size_t m = a.rows(), n = a.cols();
  if (row.numel() != n) {
    throw DimensionError("add_row: row " + to_string(row.shape()) + " does not match " +
                         to_string(a.shape()));
  }
  std::vector<float> c(a.numel());
  const auto& kt = kernels::active();
  for (std::size_t i = 0; i < m; ++i) kt.add(a.data() + i * n, row.data(), c.data() + i * n, n);
  return Tensor::make_result(a.shape(), std::move(c), {a, row}, "add_row",
                             [m, n](const Node& out) {
                               const auto& kt = kernels::active();
                               if (auto ga = input_grad(out, 0); !ga.empty()) {
                                 kt.axpy(1.0f, out.grad.data(), ga.data(), ga.size());
                               }
                               if (auto gr = input_grad(out, 1); !gr.empty()) {
                                 for (std::size_t i = 0; i < m; ++i) kt.axpy(1.0f, out.grad.data() + i * n, gr.data(), n);
                               }
                             });
}

Tensor add_n(std::span<const Tensor> terms) {
  if (terms.empty()) throw ContractError("add_n: no terms");
  std::vector<float> c(terms[0].numel(), 0.0f);
  const auto& kt = kernels::active();
  for (const Tensor& t : terms) {
    require_same_shape(terms[0], t, "add_n");
    kt.axpy(1.0f, t.data(), c.data(), c.size());
  }
  return Tensor::make_result(terms[0].shape(), std::move(c),
                             std::vector<Tensor>(terms.begin(), terms.end()), "add_n",
                             [](const Node& out) {
                               const auto& kt = kernels::active();
                               for (std::size_t i = 0; i < out.inputs.size(); ++i) {
                                 if (auto g = input_grad(out, i); !g.empty()) {
                                   kt.axpy(1.0f, out.grad.data(), g.data(), g.size());
                                 }
                               }
                             });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<float> c(a.numel());
  kernels::active().mul(a.data(), b.data(), c.data(), c.size());
  return Tensor::make_result(a.shape(), std::move(c), {a, b}, "mul", [](const Node& out) {
    const std::size_t n = out.value.size();
    for (std::size_t i = 0; i < 2; ++i) {
      auto g = input_grad(out, i);
      if (g.empty()) continue;
      const auto& other = input_value(out, 1 - i);
      for (std::size_t j = 0; j < n; ++j) g[j] += out.grad[j] * other[j];
    }
  });
}

Tensor scale(const Tensor& a, float factor) {
  std::vector<float> c(a.values().begin(), a.values().end());
  kernels::active().scale(factor, c.data(), c.size());
  return Tensor::make_result(a.shape(), std::move(c), {a}, "scale", [factor](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      kernels::active().axpy(factor, out.grad.data(), g.data(), g.size());
    }
  });
}

Tensor sigmoid(const Tensor& x) {
  std::vector<float> y(x.numel());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 1.0f / (1.0f + std::exp(-x.at(i)));
  return Tensor::make_result(x.shape(), std::move(y), {x}, "sigmoid", [](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        const float s = out.value[i];
        g[i] += out.grad[i] * s * (1.0f - s);
      }
    }
  });
}

Tensor tanh(const Tensor& x) {
  std::vector<float> y(x.numel());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(x.at(i));
  return Tensor::make_result(x.shape(), std::move(y), {x}, "tanh", [](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        const float t = out.value[i];
        g[i] += out.grad[i] * (1.0f - t * t);
      }
    }
  });
}

Tensor relu(const Tensor& x) {
  std::vector<float> y(x.numel());
  kernels::active().relu(x.data(), y.data(), y.size());
  return Tensor::make_result(x.shape(), std::move(y), {x}, "relu", [](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (out.value[i] > 0.0f) g[i] += out.grad[i];
      }
    }
  });
}

Tensor log(const Tensor& x) {
  std::vector<float> y(x.numel());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::log(x.at(i));
  return Tensor::make_result(x.shape(), std::move(y), {x}, "log", [](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      const auto& xv = input_value(out, 0);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] / xv[i];
    }
  });
}

Tensor sum(const Tensor& x) {
  const double s = kernels::active().sum(x.data(), x.numel());
  return Tensor::make_result({1}, {static_cast<float>(s)}, {x}, "sum", [](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      const float d = out.grad[0];
      for (float& v : g) v += d;
    }
  });
}

Tensor mean(const Tensor& x) {
  const std::size_t n = x.numel();
  const double s = kernels::active().sum(x.data(), n) / static_cast<double>(n);
  return Tensor::make_result({1}, {static_cast<float>(s)}, {x}, "mean", [n](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      const float d = out.grad[0] / static_cast<float>(n);
      for (float& v : g) v += d;
    }
  });
}

Tensor mean_rows(const Tensor& x) {
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> acc(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) acc[j] += x.at(i, j);
  }
  std::vector<float> y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = static_cast<float>(acc[j] / static_cast<double>(m));
  return Tensor::make_result({n}, std::move(y), {x}, "mean_rows", [m, n](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      const float inv = 1.0f / static_cast<float>(m);
      for (std::size_t i = 0; i < m; ++i) {
        kernels::active().axpy(inv, out.grad.data(), g.data() + i * n, n);
      }
    }
  });
}

Tensor concat_cols(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_cols: no parts");
  const std::size_t m = parts[0].rows();
  bool all_rank1 = true;
  std::vector<std::size_t> widths;
  std::size_t total = 0;
  for (const Tensor& p : parts) {
    if (p.rows() != m) {
      throw DimensionError("concat_cols: row count mismatch " + to_string(parts[0].shape()) +
                           " vs " + to_string(p.shape()));
    }
    all_rank1 = all_rank1 && p.rank() == 1;
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<float> y(m * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      std::copy_n(parts[k].data() + i * widths[k], widths[k], y.data() + i * total + offset);
    }
    offset += widths[k];
  }
  Shape shape = all_rank1 ? Shape{total} : matrix_shape(m, total);
  return Tensor::make_result(std::move(shape), std::move(y),
                             std::vector<Tensor>(parts.begin(), parts.end()), "concat_cols",
                             [m, total, widths](const Node& out) {
                               std::size_t offset = 0;
                               for (std::size_t k = 0; k < widths.size(); ++k) {
                                 if (auto g = input_grad(out, k); !g.empty()) {
                                   for (std::size_t i = 0; i < m; ++i) {
                                     kernels::active().axpy(1.0f, out.grad.data() + i * total + offset,
                                                            g.data() + i * widths[k], widths[k]);
                                   }
                                 }
                                 offset += widths[k];
                               }
                             });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw ContractError("concat_rows: no parts");
  const std::size_t n = parts[0].cols();
  std::size_t m = 0;
  for (const Tensor& p : parts) {
    if (p.cols() != n) {
      throw DimensionError("concat_rows: column count mismatch " + to_string(parts[0].shape()) +
                           " vs " + to_string(p.shape()));
    }
    m += p.rows();
  }
  std::vector<float> y;
  y.reserve(m * n);
  for (const Tensor& p : parts) y.insert(y.end(), p.values().begin(), p.values().end());
  return Tensor::make_result(matrix_shape(m, n), std::move(y),
                             std::vector<Tensor>(parts.begin(), parts.end()), "concat_rows",
                             [](const Node& out) {
                               std::size_t offset = 0;
                               for (std::size_t k = 0; k < out.inputs.size(); ++k) {
                                 const std::size_t len = out.inputs[k]->value.size();
                                 if (auto g = input_grad(out, k); !g.empty()) {
                                   kernels::active().axpy(1.0f, out.grad.data() + offset, g.data(), len);
                                 }
                                 offset += len;
                               }
                             });
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (patcls::numel(shape) != x.numel()) {
    throw DimensionError("reshape: cannot view " + to_string(x.shape()) + " as " + to_string(shape));
  }
  std::vector<float> y(x.values().begin(), x.values().end());
  return Tensor::make_result(std::move(shape), std::move(y), {x}, "reshape", [](const Node& out) {
    if (auto g = input_grad(out, 0); !g.empty()) {
      kernels::active().axpy(1.0f, out.grad.data(), g.data(), g.size());
    }
  });
}

Tensor gather_rows(const Tensor& table, std::span<const std::int32_t> ids, std::int32_t skip_id) {
  const std::size_t vocab = table.rows(), width = table.cols();
  std::vector<std::int32_t> kept(ids.begin(), ids.end());
  std::vector<float> y(ids.size() * width, 0.0f);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::int32_t id = kept[i];
    if (id == skip_id) continue;
    if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
      throw LookupError("gather_rows: id " + std::to_string(id) + " outside table of " +
                        std::to_string(vocab) + " rows");
    }
    std::copy_n(table.data() + static_cast<std::size_t>(id) * width, width, y.data() + i * width);
  }
  return Tensor::make_result({ids.size(), width}, std::move(y), {table}, "gather_rows",
                             [kept = std::move(kept), skip_id, width](const Node& out) {
                               auto g = input_grad(out, 0);
                               if (g.empty()) return;
                               for (std::size_t i = 0; i < kept.size(); ++i) {
                                 if (kept[i] == skip_id) continue;
                                 kernels::active().axpy(1.0f, out.grad.data() + i * width,
                                                        g.data() + static_cast<std::size_t>(kept[i]) * width, width);
                               }
                             });
}

namespace {

// Softmax backward for one row: dx = y * (dy - <dy, y>).
void softmax_row_backward(const float* y, const float* dy, float* dx, std::size_t n) {
  double inner = 0.0;
  for (std::size_t j = 0; j < n; ++j) inner += static_cast<double>(dy[j]) * y[j];
  const float c = static_cast<float>(inner);
  for (std::size_t j = 0; j < n; ++j) dx[j] += y[j] * (dy[j] - c);
}

Tensor softmax_impl(const Tensor& x, const std::uint8_t* mask, std::size_t valid_cols,
                    const char* op) {
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<float> y(m * n, 0.0f);
  for (std::size_t i = 0; i < m; ++i) {
    const float* row = x.data() + i * n;
    auto admitted = [&](std::size_t j) {
      return mask ? mask[i * n + j] != 0 : j < valid_cols;
    };
    float mx = -std::numeric_limits<float>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (admitted(j)) mx = std::max(mx, row[j]);
    }
    if (mx == -std::numeric_limits<float>::infinity()) continue;
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!admitted(j)) continue;
      const float e = std::exp(row[j] - mx);
      y[i * n + j] = e;
      z += e;
    }
    const float inv = static_cast<float>(1.0 / z);
    for (std::size_t j = 0; j < n; ++j) y[i * n + j] *= inv;
  }
  return Tensor::make_result(x.shape(), std::move(y), {x}, op, [m, n](const Node& out) {
    auto g = input_grad(out, 0);
    if (g.empty()) return;
    for (std::size_t i = 0; i < m; ++i) {
      softmax_row_backward(out.value.data() + i * n, out.grad.data() + i * n, g.data() + i * n, n);
    }
  });
}

}  // namespace

Tensor softmax_rows(const Tensor& x) { return softmax_impl(x, nullptr, x.cols(), "softmax_rows"); }

Tensor masked_softmax_rows(const Tensor& x, std::size_t valid_cols) {
  return softmax_impl(x, nullptr, std::min(valid_cols, x.cols()), "masked_softmax_rows");
}

Tensor masked_softmax_rows(const Tensor& x, std::span<const std::uint8_t> mask) {
  if (mask.size() != x.numel()) {
    throw DimensionError("masked_softmax_rows: mask of " + std::to_string(mask.size()) +
                         " entries for tensor " + to_string(x.shape()));
  }
  return softmax_impl(x, mask.data(), 0, "masked_softmax_rows");
}

Tensor dropout(const Tensor& x, float rate, Rng& rng, bool training) {
  if (!training || rate <= 0.0f) return x;
  if (rate >= 1.0f) throw ConfigError("dropout rate must be below 1");
  const float keep_scale = 1.0f / (1.0f - rate);
  std::vector<float> mask(x.numel());
  for (float& v : mask) v = rng.bernoulli(rate) ? 0.0f : keep_scale;
  std::vector<float> y(x.numel());
  kernels::active().mul(x.data(), mask.data(), y.data(), y.size());
  return Tensor::make_result(x.shape(), std::move(y), {x}, "dropout",
                             [mask = std::move(mask)](const Node& out) {
                               if (auto g = input_grad(out, 0); !g.empty()) {
                                 for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad[i] * mask[i];
                               }
                             });
}

}  // namespace patcls
