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

#include "gtm/autodiff.hpp"

#include <cmath>
#include <string>

#include "gtm/errors.hpp"
#include "gtm/kernels.hpp"

namespace gtm {

namespace k = kernels::omp;

const Tensor& Var::value() const { return tape->value(*this); }
const Tensor& Var::grad() const { return tape->grad(*this); }

Var Tape::leaf(Tensor value, bool requires_grad) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  bool needs = false;
  for (Var in : inputs) {
    if (in.tape != this) throw ContractError("op input recorded on a different tape");
    needs = needs || node(in).requires_grad;
  }
  Node n;
  n.value = std::move(value);
  n.requires_grad = needs;
  if (needs) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

const Tape::Node& Tape::node(Var v) const {
  if (v.tape != this || v.id >= nodes_.size())
    throw ContractError("variable does not belong to this tape");
  return nodes_[v.id];
}

Tape::Node& Tape::node(Var v) {
  return const_cast<Node&>(static_cast<const Tape&>(*this).node(v));
}

const Tensor& Tape::value(Var v) const { return node(v).value; }

const Tensor& Tape::grad(Var v) const {
  const Node& n = node(v);
  if (!n.has_grad) {
    n.grad = Tensor(n.value.rows(), n.value.cols());
    n.has_grad = true;
  }
  return n.grad;
}

bool Tape::requires_grad(Var v) const { return node(v).requires_grad; }

void Tape::accumulate(Var v, const Tensor& g) {
  Node& n = node(v);
  if (!n.requires_grad) return;
  if (!g.same_shape(n.value)) throw ShapeError("gradient shape does not match value");
  if (!n.has_grad) {
    n.grad = g;
    n.has_grad = true;
  } else {
    n.grad += g;
  }
}

void Tape::backward(Var loss) {
  const Node& ln = node(loss);
  if (ln.value.rows() != 1 || ln.value.cols() != 1) {
    throw ContractError("backward requires a scalar loss, got " +
                        std::to_string(ln.value.rows()) + "x" +
                        std::to_string(ln.value.cols()));
  }
  for (Node& n : nodes_) {
    n.grad = Tensor();
    n.has_grad = false;
  }
  if (!ln.requires_grad) return;
  accumulate(loss, Tensor(1, 1, 1.0));
  for (std::size_t id = loss.id + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.has_grad && n.backward) n.backward(*this, n.grad);
  }
}

namespace ops {

namespace {

void require_same_tape(Var a, Var b) {
  if (a.tape != b.tape || a.tape == nullptr)
    throw ContractError("op inputs live on different tapes");
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  Tensor out = k::matmul(a.value(), b.value());
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    if (t.requires_grad(a)) t.accumulate(a, k::matmul_a_bt(g, t.value(b)));
    if (t.requires_grad(b)) t.accumulate(b, k::matmul_at_b(t.value(a), g));
  });
}

Var spmm(const SparseMatrix& s, Var b) {
  Tensor out = k::spmm(s, b.value());
  const SparseMatrix* sp = &s;
  return b.tape->record(std::move(out), {b}, [sp, b](Tape& t, const Tensor& g) {
    t.accumulate(b, k::spmm(sp->transpose(), g));
  });
}

Var leaky_relu(Var x, double slope) {
  if (!(slope > 0.0 && slope < 1.0))
    throw ArgumentError("leaky_relu slope must lie in (0, 1)");
  const Tensor& xv = x.value();
  Tensor out(xv.rows(), xv.cols());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    const double v = xv.data()[i];
    out.data()[i] = v >= 0.0 ? v : slope * v;
  }
  return x.tape->record(std::move(out), {x}, [x, slope](Tape& t, const Tensor& g) {
    const Tensor& xv = t.value(x);
    Tensor dx(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.size(); ++i)
      dx.data()[i] = g.data()[i] * (xv.data()[i] >= 0.0 ? 1.0 : slope);
    t.accumulate(x, dx);
  });
}

Var softmax_rows(Var x) {
  Tensor out = k::softmax_rows(x.value());
  Tensor probs = out;
  return x.tape->record(std::move(out), {x}, [x, p = std::move(probs)](Tape& t, const Tensor& g) {
    Tensor dx(g.rows(), g.cols());
    for (std::size_t r = 0; r < g.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t j = 0; j < g.cols(); ++j) dot += g(r, j) * p(r, j);
      for (std::size_t j = 0; j < g.cols(); ++j) dx(r, j) = p(r, j) * (g(r, j) - dot);
    }
    t.accumulate(x, dx);
  });
}

Var batch_norm(Var x, Var gamma, Var beta, BatchNormState& state, Mode mode,
               const BatchNormOptions& opts) {
  require_same_tape(x, gamma);
  require_same_tape(x, beta);
  const Tensor& xv = x.value();
  const std::size_t m = xv.rows();
  const std::size_t n = xv.cols();
  if (gamma.value().rows() != 1 || gamma.value().cols() != n ||
      beta.value().rows() != 1 || beta.value().cols() != n) {
    throw ShapeError("batch_norm: gamma/beta must be 1x" + std::to_string(n));
  }
  if (state.running_mean.rows() != 1 || state.running_mean.cols() != n ||
      !state.running_var.same_shape(state.running_mean)) {
    throw ShapeError("batch_norm: running statistics must be 1x" + std::to_string(n));
  }
  if (mode == Mode::kTrain && m < 2) {
    throw BatchError("batch_norm in train mode needs at least 2 rows, got " +
                     std::to_string(m));
  }

  std::vector<double> mean(n), inv_std(n);
  if (mode == Mode::kTrain) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += xv(i, j);
      mean[j] = s / static_cast<double>(m);
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = xv(i, j) - mean[j];
        v += d * d;
      }
      v /= static_cast<double>(m);
      inv_std[j] = 1.0 / std::sqrt(v + opts.eps);
      state.running_mean(0, j) =
          (1.0 - opts.momentum) * state.running_mean(0, j) + opts.momentum * mean[j];
      state.running_var(0, j) =
          (1.0 - opts.momentum) * state.running_var(0, j) + opts.momentum * v;
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      mean[j] = state.running_mean(0, j);
      inv_std[j] = 1.0 / std::sqrt(state.running_var(0, j) + opts.eps);
    }
  }

  Tensor xhat(m, n), out(m, n);
  const Tensor& gv = gamma.value();
  const Tensor& bv = beta.value();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      xhat(i, j) = (xv(i, j) - mean[j]) * inv_std[j];
      out(i, j) = gv(0, j) * xhat(i, j) + bv(0, j);
    }

  const bool train = mode == Mode::kTrain;
  return x.tape->record(
      std::move(out), {x, gamma, beta},
      [x, gamma, beta, train, xhat = std::move(xhat), inv_std = std::move(inv_std)](
          Tape& t, const Tensor& g) {
        const std::size_t m = g.rows();
        const std::size_t n = g.cols();
        std::vector<double> sum_g(n, 0.0), sum_gx(n, 0.0);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            sum_g[j] += g(i, j);
            sum_gx[j] += g(i, j) * xhat(i, j);
          }
        if (t.requires_grad(gamma)) t.accumulate(gamma, Tensor(1, n, sum_gx));
        if (t.requires_grad(beta)) t.accumulate(beta, Tensor(1, n, sum_g));
        if (!t.requires_grad(x)) return;
        const Tensor& gv = t.value(gamma);
        Tensor dx(m, n);
        const double md = static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double scale = gv(0, j) * inv_std[j];
            dx(i, j) = train ? scale * (g(i, j) - sum_g[j] / md - xhat(i, j) * sum_gx[j] / md)
                             : scale * g(i, j);
          }
        t.accumulate(x, dx);
      });
}

Var add_row(Var x, Var bias) {
  require_same_tape(x, bias);
  const Tensor& xv = x.value();
  const Tensor& bv = bias.value();
  if (bv.rows() != 1 || bv.cols() != xv.cols())
    throw ShapeError("add_row: bias must be 1x" + std::to_string(xv.cols()));
  Tensor out = xv;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += bv(0, j);
  return x.tape->record(std::move(out), {x, bias}, [x, bias](Tape& t, const Tensor& g) {
    t.accumulate(x, g);
    if (t.requires_grad(bias)) {
      Tensor db(1, g.cols());
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) db(0, j) += g(i, j);
      t.accumulate(bias, db);
    }
  });
}

Var gather_rows(Var x, std::vector<std::size_t> rows) {
  const Tensor& xv = x.value();
  Tensor out(rows.size(), xv.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= xv.rows())
      throw ShapeError("gather_rows: row " + std::to_string(rows[i]) + " out of range");
    std::copy(xv.row(rows[i]).begin(), xv.row(rows[i]).end(), out.row(i).begin());
  }
  return x.tape->record(std::move(out), {x},
                        [x, rows = std::move(rows)](Tape& t, const Tensor& g) {
                          const Tensor& xv = t.value(x);
                          Tensor dx(xv.rows(), xv.cols());
                          for (std::size_t i = 0; i < rows.size(); ++i)
                            for (std::size_t j = 0; j < g.cols(); ++j)
                              dx(rows[i], j) += g(i, j);
                          t.accumulate(x, dx);
                        });
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  if (!a.value().same_shape(b.value())) throw ShapeError("add: shape mismatch");
  Tensor out = a.value();
  out += b.value();
  return a.tape->record(std::move(out), {a, b}, [a, b](Tape& t, const Tensor& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var scale(Var a, double c) {
  Tensor out = a.value();
  for (double& v : out.data()) v *= c;
  return a.tape->record(std::move(out), {a}, [a, c](Tape& t, const Tensor& g) {
    Tensor da = g;
    for (double& v : da.data()) v *= c;
    t.accumulate(a, da);
  });
}

Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  return x.tape->record(Tensor(1, 1, s), {x}, [x](Tape& t, const Tensor& g) {
    const Tensor& xv = t.value(x);
    t.accumulate(x, Tensor(xv.rows(), xv.cols(), g(0, 0)));
  });
}

}  // namespace ops

}  // namespace gtm
