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
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace patcls {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

class Tensor;

namespace detail {

// One vertex of the define-by-run graph. Leaves (parameters, inputs) have no
// backward function; op results hold their inputs and a closure that
// accumulates input gradients from this node's gradient.
struct Node {
  Shape shape;
  std::vector<float> value;
  std::vector<float> grad;
  bool has_grad = false;
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(const Node&)> backward;

  std::span<float> grad_buffer() {
    if (!has_grad) {
      grad.assign(value.size(), 0.0f);
      has_grad = true;
    }
    return grad;
  }
};

}  // namespace detail

// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_mode_enabled();

// Dense row-major f32 array with an optional autodiff node. Copies share the
// underlying node (handle semantics); use clone() for a deep copy.
class Tensor {
 public:
  using BackwardFn = std::function<void(const detail::Node& out)>;

  Tensor() = default;
  Tensor(Shape shape, std::vector<float> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, float value, bool requires_grad = false);
  static Tensor scalar(float value);

  // Builds an op result. Records `backward` only when grad mode is on and at
  // least one input requires a gradient.
  static Tensor make_result(Shape shape, std::vector<float> values, std::vector<Tensor> inputs,
                            const char* op, BackwardFn backward);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t numel() const { return node_->value.size(); }
  // Rank-2 view; a rank-1 tensor of n elements reads as 1 x n.
  std::size_t rows() const;
  std::size_t cols() const;

  std::span<const float> values() const { return node_->value; }
  std::span<float> values() { return node_->value; }
  const float* data() const { return node_->value.data(); }
  float* data() { return node_->value.data(); }
  float at(std::size_t i) const { return node_->value[i]; }
  float at(std::size_t r, std::size_t c) const { return node_->value[r * cols() + c]; }
  float item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->has_grad; }
  std::span<const float> grad() const { return node_->grad; }
  // Gradient storage, allocated (zeroed) on first access.
  std::span<float> grad_buffer() const { return node_->grad_buffer(); }
  void zero_grad() const;

  // Reverse-mode sweep from this scalar. Gradients accumulate additively into
  // every reachable tensor that requires them.
  void backward() const;

  // Value copy with no graph history.
  Tensor detach() const;
  Tensor clone() const { return detach(); }

  const char* op_name() const { return node_->op; }
  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  std::shared_ptr<detail::Node> node_;
};

}  // namespace patcls
