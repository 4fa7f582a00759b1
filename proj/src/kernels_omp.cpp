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
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gtm/errors.hpp"
#include "gtm/kernels.hpp"

namespace gtm::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

namespace {

using Index = std::ptrdiff_t;

void check_inner(std::size_t lhs, std::size_t rhs, const char* op) {
  if (lhs != rhs) {
    throw ShapeError(std::string(op) + ": inner dimensions " + std::to_string(lhs) +
                     " and " + std::to_string(rhs) + " disagree");
  }
}

double affinity(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) s += std::sqrt(a[k] * b[k]);
  return s;
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  check_inner(a.cols(), b.rows(), "matmul");
  Tensor c(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(a.rows()); ++i) {
    double* crow = pc + i * n;
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = pa[i * inner + k];
      const double* brow = pb + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Tensor matmul_at_b(const Tensor& a, const Tensor& b) {
  check_inner(a.rows(), b.rows(), "matmul_at_b");
  Tensor c(a.cols(), b.cols());
  const std::size_t m = a.rows();
  const std::size_t ka = a.cols();
  const std::size_t n = b.cols();
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  // Each output row p owns its accumulation over i, in ascending i.
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < static_cast<Index>(ka); ++p) {
    double* crow = pc + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double aip = pa[i * ka + p];
      const double* brow = pb + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
  return c;
}

Tensor matmul_a_bt(const Tensor& a, const Tensor& b) {
  check_inner(a.cols(), b.cols(), "matmul_a_bt");
  Tensor c(a.rows(), b.rows());
  const std::size_t inner = a.cols();
  const std::size_t n = b.rows();
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(a.rows()); ++i) {
    const double* arow = pa + i * inner;
    for (std::size_t p = 0; p < n; ++p) {
      const double* brow = pb + p * inner;
      double acc = 0.0;
      for (std::size_t j = 0; j < inner; ++j) acc += arow[j] * brow[j];
      pc[i * n + p] = acc;
    }
  }
  return c;
}

Tensor spmm(const SparseMatrix& s, const Tensor& b) {
  check_inner(s.cols(), b.rows(), "spmm");
  Tensor c(s.rows(), b.cols());
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_idx();
  const auto& v = s.values();
  const std::size_t n = b.cols();
  const double* pb = b.data().data();
  double* pc = c.data().data();
#pragma omp parallel for schedule(dynamic, 64)
  for (Index r = 0; r < static_cast<Index>(s.rows()); ++r) {
    double* crow = pc + r * n;
    for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
      const double w = v[k];
      const double* brow = pb + static_cast<std::size_t>(ci[k]) * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += w * brow[j];
    }
  }
  return c;
}

Tensor softmax_rows(const Tensor& x) {
  Tensor y(x.rows(), x.cols());
  const std::size_t n = x.cols();
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < static_cast<Index>(x.rows()); ++r) {
    const double* xr = x.data().data() + r * n;
    double* yr = y.data().data() + r * n;
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, xr[j]);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      total += yr[j];
    }
    for (std::size_t j = 0; j < n; ++j) yr[j] /= total;
  }
  return y;
}

Tensor diffusion_gram(const Tensor& x, const Tensor& y) {
  check_inner(x.cols(), y.cols(), "diffusion_gram");
  Tensor g(x.rows(), y.rows());
  const std::size_t dim = x.cols();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < static_cast<Index>(x.rows()); ++i)
    for (std::size_t j = 0; j < y.rows(); ++j)
      g(static_cast<std::size_t>(i), j) = detail::diffusion_from_affinity(
          affinity(x.data().data() + i * dim, y.data().data() + j * dim, dim));
  return g;
}

MmdResult mmd(const Tensor& prior, const Tensor& post, bool with_grad) {
  check_inner(prior.cols(), post.cols(), "mmd");
  const std::size_t m = prior.rows();
  const std::size_t n = post.rows();
  const std::size_t dim = prior.cols();
  const double* pp = prior.data().data();
  const double* pq = post.data().data();

  std::vector<double> prior_rows(m), post_rows(n), cross_rows(m);
#pragma omp parallel
  {
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < static_cast<Index>(m); ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (static_cast<Index>(j) != i)
          r += detail::diffusion_from_affinity(affinity(pp + i * dim, pp + j * dim, dim));
      prior_rows[i] = r;
    }
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < static_cast<Index>(n); ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (static_cast<Index>(j) != i)
          r += detail::diffusion_from_affinity(affinity(pq + i * dim, pq + j * dim, dim));
      post_rows[i] = r;
    }
#pragma omp for schedule(static)
    for (Index i = 0; i < static_cast<Index>(m); ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        r += detail::diffusion_from_affinity(affinity(pp + i * dim, pq + j * dim, dim));
      cross_rows[i] = r;
    }
  }
  double prior_sum = 0.0, post_sum = 0.0, cross_sum = 0.0;
  for (double r : prior_rows) prior_sum += r;
  for (double r : post_rows) post_sum += r;
  for (double r : cross_rows) cross_sum += r;

  const double c_prior = 1.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
  const double c_post = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  const double c_cross = 2.0 / (static_cast<double>(m) * static_cast<double>(n));

  MmdResult out;
  out.value = c_prior * prior_sum + c_post * post_sum - c_cross * cross_sum;
  if (!with_grad) return out;

  out.grad_post = Tensor(n, dim);
  double* pg = out.grad_post.data().data();
#pragma omp parallel
  {
    std::vector<double> acc(dim);
#pragma omp for schedule(static)
    for (Index j = 0; j < static_cast<Index>(n); ++j) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const double* qj = pq + j * dim;
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<Index>(i) == j) continue;
        const double* qi = pq + i * dim;
        const double w = 2.0 * c_post * detail::diffusion_slope(affinity(qi, qj, dim));
        for (std::size_t k = 0; k < dim; ++k) acc[k] += w * std::sqrt(qi[k]);
      }
      for (std::size_t i = 0; i < m; ++i) {
        const double* pi = pp + i * dim;
        const double w = c_cross * detail::diffusion_slope(affinity(pi, qj, dim));
        for (std::size_t k = 0; k < dim; ++k) acc[k] -= w * std::sqrt(pi[k]);
      }
      for (std::size_t k = 0; k < dim; ++k)
        pg[j * dim + k] = qj[k] > 0.0 ? acc[k] / std::sqrt(qj[k]) : 0.0;
    }
  }
  return out;
}

}  // namespace omp

}  // namespace gtm::kernels
