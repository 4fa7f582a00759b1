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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gtm/errors.hpp"
#include "gtm/kernels.hpp"

namespace gtm::kernels {

namespace detail {

double diffusion_from_affinity(double s) {
  const double theta = std::acos(std::clamp(s, 0.0, 1.0));
  return std::exp(-theta * theta);
}

double diffusion_slope(double s) {
  const double theta = std::acos(std::clamp(s, 0.0, 1.0));
  const double k = std::exp(-theta * theta);
  // theta / sin(theta) = 1 + theta^2 / 6 + O(theta^4)
  if (theta < 1e-6) return k * (1.0 + theta * theta / 6.0);
  return k * theta / std::sin(theta);
}

}  // namespace detail

namespace {

void check_inner(std::size_t lhs, std::size_t rhs, const char* op) {
  if (lhs != rhs) {
    throw ShapeError(std::string(op) + ": inner dimensions " + std::to_string(lhs) +
                     " and " + std::to_string(rhs) + " disagree");
  }
}

}  // namespace

namespace serial {

Tensor matmul(const Tensor& a, const Tensor& b) {
  check_inner(a.cols(), b.rows(), "matmul");
  Tensor c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Tensor matmul_at_b(const Tensor& a, const Tensor& b) {
  check_inner(a.rows(), b.rows(), "matmul_at_b");
  Tensor c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double aip = a(i, p);
      for (std::size_t j = 0; j < b.cols(); ++j) c(p, j) += aip * b(i, j);
    }
  return c;
}

Tensor matmul_a_bt(const Tensor& a, const Tensor& b) {
  check_inner(a.cols(), b.cols(), "matmul_a_bt");
  Tensor c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = 0; p < b.rows(); ++p) {
      double acc = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * b(p, j);
      c(i, p) = acc;
    }
  return c;
}

Tensor spmm(const SparseMatrix& s, const Tensor& b) {
  check_inner(s.cols(), b.rows(), "spmm");
  Tensor c(s.rows(), b.cols());
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_idx();
  const auto& v = s.values();
  for (std::size_t r = 0; r < s.rows(); ++r)
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(r, j) += v[k] * b(ci[k], j);
  return c;
}

Tensor softmax_rows(const Tensor& x) {
  Tensor y(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < x.cols(); ++j) mx = std::max(mx, x(r, j));
    double total = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      y(r, j) = std::exp(x(r, j) - mx);
      total += y(r, j);
    }
    for (std::size_t j = 0; j < x.cols(); ++j) y(r, j) /= total;
  }
  return y;
}

Tensor diffusion_gram(const Tensor& x, const Tensor& y) {
  check_inner(x.cols(), y.cols(), "diffusion_gram");
  Tensor g(x.rows(), y.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.cols(); ++k) s += std::sqrt(x(i, k) * y(j, k));
      g(i, j) = detail::diffusion_from_affinity(s);
    }
  return g;
}

MmdResult mmd(const Tensor& prior, const Tensor& post, bool with_grad) {
  check_inner(prior.cols(), post.cols(), "mmd");
  const std::size_t m = prior.rows();
  const std::size_t n = post.rows();
  const std::size_t dim = prior.cols();

  auto affinity = [dim](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += std::sqrt(a[k] * b[k]);
    return s;
  };

  double prior_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) r += detail::diffusion_from_affinity(affinity(prior.row(i), prior.row(j)));
    prior_sum += r;
  }
  double post_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += detail::diffusion_from_affinity(affinity(post.row(i), post.row(j)));
    post_sum += r;
  }
  double cross_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      r += detail::diffusion_from_affinity(affinity(prior.row(i), post.row(j)));
    cross_sum += r;
  }

  const double c_prior = 1.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
  const double c_post = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  const double c_cross = 2.0 / (static_cast<double>(m) * static_cast<double>(n));

  MmdResult out;
  out.value = c_prior * prior_sum + c_post * post_sum - c_cross * cross_sum;
  if (!with_grad) return out;

  out.grad_post = Tensor(n, dim);
  std::vector<double> acc(dim);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      const double w = 2.0 * c_post * detail::diffusion_slope(affinity(post.row(i), post.row(j)));
      for (std::size_t k = 0; k < dim; ++k) acc[k] += w * std::sqrt(post(i, k));
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double w = c_cross * detail::diffusion_slope(affinity(prior.row(i), post.row(j)));
      for (std::size_t k = 0; k < dim; ++k) acc[k] -= w * std::sqrt(prior(i, k));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const double q = post(j, k);
      out.grad_post(j, k) = q > 0.0 ? acc[k] / std::sqrt(q) : 0.0;
    }
  }
  return out;
}

}  // namespace serial

}  // namespace gtm::kernels
