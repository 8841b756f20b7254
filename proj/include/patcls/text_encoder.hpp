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
#include <cstdint>
#include <span>

#include "patcls/corpus.hpp"
#include "patcls/nn.hpp"

namespace patcls {

// Embedding rows for a padded id sequence. PAD positions produce zero rows
// and pass no gradient; MASK is an ordinary trainable row.
Tensor embed_words(std::span<const std::int32_t> tokens, const Tensor& table);

// One LSTM direction. Gate columns are laid out as [input, forget, cell, output].
struct LstmDirection {
  Tensor w_ih;  // T x 4F
  Tensor w_hh;  // F x 4F
  Tensor bias;  // 4F
};

struct LstmParams {
  LstmDirection forward;
  LstmDirection backward;
  std::size_t hidden = 0;
};

// Runs over rows [0, valid_len) of x (reverse order when `reverse`), with
// zero initial state. Rows at and beyond valid_len are zero in the output.
Tensor lstm_direction(const Tensor& x, std::size_t valid_len, const LstmDirection& p, bool reverse);

// [forward ; backward] hidden states, n x 2F.
Tensor bilstm_encode(const Tensor& x, std::size_t valid_len, const LstmParams& p);

class TextEncoder {
 public:
  TextEncoder(ModelParams& params, std::size_t vocab_size, std::size_t word_dim, std::size_t hidden, Rng& rng);

  const Tensor& word_embeddings() const { return words_; }
  std::size_t word_dim() const { return words_.cols(); }
  std::size_t hidden() const { return lstm_.hidden; }

  // Contextual word vectors V (n x 2F) for a padded token sequence.
  Tensor encode(std::span<const std::int32_t> tokens, std::size_t valid_len, const ForwardContext& ctx) const;

  // Overwrites embedding rows of words present in `vectors`; returns how many
  // rows were replaced.
  std::size_t load_pretrained(const PretrainedVectors& vectors, const Vocabulary& vocab);

 private:
  Tensor words_;
  LstmParams lstm_;
};

}  // namespace patcls
