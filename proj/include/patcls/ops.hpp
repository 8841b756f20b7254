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
#include <span>
#include <vector>

#include "patcls/rng.hpp"
#include "patcls/tensor.hpp"

// Differentiable tensor operations. Rank-1 operands read as a single row
// wherever a matrix is expected. Every op throws DimensionError naming both
// shapes when operands do not compose.
namespace patcls {

// a[m,k] * b[k,n]
Tensor matmul(const Tensor& a, const Tensor& b);
// a[m,k] * b[n,k]^T
Tensor matmul_nt(const Tensor& a, const Tensor& b);
// x[m,k] * w[k,n] + bias[n] (bias broadcast over rows; may be undefined)
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& bias);

Tensor add(const Tensor& a, const Tensor& b);
// a[m,n] + row[n] broadcast over rows
Tensor add_row(const Tensor& a, const Tensor& row);
Tensor add_n(std::span<const Tensor> terms);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, float factor);

Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
// Natural log; inputs must be positive.
Tensor log(const Tensor& x);

// Full reductions to shape [1], accumulated in double.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
// Column-wise mean over rows: [m,n] -> [n].
Tensor mean_rows(const Tensor& x);

// Side-by-side: [m,n1] ++ [m,n2] -> [m,n1+n2]. Rank-1 inputs give rank 1.
Tensor concat_cols(std::span<const Tensor> parts);
// Stacked: [m1,n] ++ [m2,n] -> [m1+m2,n].
Tensor concat_rows(std::span<const Tensor> parts);
Tensor reshape(const Tensor& x, Shape shape);

// Rows of table[V,T] selected by ids. Rows whose id equals skip_id are zero
// and receive no gradient. Ids outside [0,V) raise LookupError.
Tensor gather_rows(const Tensor& table, std::span<const std::int32_t> ids,
                   std::int32_t skip_id = -1);

// Row-wise softmax, max-subtracted.
Tensor softmax_rows(const Tensor& x);
// Softmax over the first valid_cols entries of each row; the rest get
// exactly zero weight.
Tensor masked_softmax_rows(const Tensor& x, std::size_t valid_cols);
// Softmax over entries with mask != 0 (mask is row-major, same numel as x).
// Rows with no admitted entry produce all zeros.
Tensor masked_softmax_rows(const Tensor& x, std::span<const std::uint8_t> mask);

// Inverted dropout. In eval mode (training == false) or at rate 0 this
// returns x itself.
Tensor dropout(const Tensor& x, float rate, Rng& rng, bool training);

}  // namespace patcls
