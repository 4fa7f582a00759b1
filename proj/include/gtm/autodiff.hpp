// Copyright 2026 The GTM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gtm/sparse.hpp"
#include "gtm/tensor.hpp"

namespace gtm {

class Tape;

// Handle to a value recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  const Tensor& grad() const;
};

// Ordered record of executed operations. Values live on the tape; backward()
// replays the recorded rules in reverse order and accumulates gradients into
// every node that requires them.
class Tape {
 public:
  // Receives the gradient flowing into the node and pushes contributions to
  // its inputs through accumulate().
  using BackwardFn = std::function<void(Tape&, const Tensor& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor value, bool requires_grad = true);
  Var constant(Tensor value) { return leaf(std::move(value), false); }

  // Records an op output. The node requires a gradient iff any input does;
  // the backward rule is dropped otherwise.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);

  const Tensor& value(Var v) const;
  // Gradient accumulated by the last backward(); zeros if nothing reached v.
  const Tensor& grad(Var v) const;
  bool requires_grad(Var v) const;

  // Adds g into the gradient of v. No-op when v does not require a gradient.
  void accumulate(Var v, const Tensor& g);

  // Throws ContractError unless loss is a 1x1 value recorded on this tape.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    // Zero gradients are materialized lazily by grad().
    mutable Tensor grad;
    bool requires_grad = false;
    mutable bool has_grad = false;
    BackwardFn backward;
  };

  const Node& node(Var v) const;
  Node& node(Var v);

  std::vector<Node> nodes_;
};

enum class Mode { kTrain, kEval };

struct BatchNormState {
  Tensor running_mean;  // 1 x n
  Tensor running_var;   // 1 x n
};

struct BatchNormOptions {
  double eps = 1e-5;
  double momentum = 0.1;
};

// Differentiable ops. Shapes are checked eagerly and raise ShapeError.
namespace ops {

Var matmul(Var a, Var b);
// s * b. The sparse matrix is a constant and must outlive backward().
Var spmm(const SparseMatrix& s, Var b);
Var leaky_relu(Var x, double slope);
Var softmax_rows(Var x);
// Column-wise batch normalization. In train mode uses biased batch
// statistics and updates `state`; in eval mode normalizes by `state`.
Var batch_norm(Var x, Var gamma, Var beta, BatchNormState& state, Mode mode,
               const BatchNormOptions& opts = {});
// x + broadcast of a 1 x n row.
Var add_row(Var x, Var bias);
Var gather_rows(Var x, std::vector<std::size_t> rows);
Var add(Var a, Var b);
Var scale(Var a, double c);
Var sum(Var x);

}  // namespace ops

}  // namespace gtm
