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

#include "gtm/objectives.hpp"

#include <cmath>
#include <string>

#include "gtm/errors.hpp"
#include "gtm/kernels.hpp"

namespace gtm {

DirichletPrior DirichletPrior::symmetric(std::size_t topics, double concentration) {
  if (topics < 1) throw ArgumentError("Dirichlet prior needs at least one component");
  if (!(concentration > 0.0)) throw ArgumentError("Dirichlet concentration must be > 0");
  return {std::vector<double>(topics, concentration)};
}

Tensor sample_dirichlet(const DirichletPrior& prior, std::size_t n, std::mt19937_64& rng) {
  if (n < 1) throw ArgumentError("sample_dirichlet: n must be >= 1");
  for (double a : prior.alpha)
    if (!(a > 0.0)) throw ArgumentError("Dirichlet concentrations must be > 0");
  const std::size_t k = prior.dim();
  std::vector<std::gamma_distribution<double>> gammas;
  gammas.reserve(k);
  for (double a : prior.alpha) gammas.emplace_back(a, 1.0);

  Tensor out(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    // With tiny concentrations every draw can underflow to zero; redraw.
    while (total == 0.0) {
      for (std::size_t j = 0; j < k; ++j) {
        out(i, j) = gammas[j](rng);
        total += out(i, j);
      }
    }
    for (std::size_t j = 0; j < k; ++j) out(i, j) /= total;
  }
  return out;
}

namespace {

void check_simplex(std::span<const double> z, const char* which) {
  double total = 0.0;
  for (double v : z) {
    if (!(v >= 0.0)) throw DomainError(std::string(which) + " has a negative or NaN entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw DomainError(std::string(which) + " sums to " + std::to_string(total) + ", not 1");
}

void check_mmd_sizes(std::size_t m, std::size_t n) {
  if (m < 2 || n < 2) {
    throw BatchError("mmd needs at least 2 samples per set, got m=" + std::to_string(m) +
                     ", n=" + std::to_string(n));
  }
}

}  // namespace

double diffusion_kernel(std::span<const double> z, std::span<const double> z_prime) {
  if (z.size() != z_prime.size()) throw ShapeError("diffusion_kernel: length mismatch");
  check_simplex(z, "z");
  check_simplex(z_prime, "z'");
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) s += std::sqrt(z[k] * z_prime[k]);
  return kernels::detail::diffusion_from_affinity(s);
}

double mmd(const Tensor& z_prior, const Tensor& z_post) {
  check_mmd_sizes(z_prior.rows(), z_post.rows());
  return kernels::omp::mmd(z_prior, z_post, false).value;
}

Var mmd(const Tensor& z_prior, Var z_post) {
  check_mmd_sizes(z_prior.rows(), z_post.value().rows());
  const bool need_grad = z_post.tape->requires_grad(z_post);
  kernels::MmdResult r = kernels::omp::mmd(z_prior, z_post.value(), need_grad);
  return z_post.tape->record(Tensor(1, 1, r.value), {z_post},
                             [z_post, grad = std::move(r.grad_post)](Tape& t, const Tensor& g) {
                               Tensor dz = grad;
                               for (double& v : dz.data()) v *= g(0, 0);
                               t.accumulate(z_post, dz);
                             });
}

namespace {

void check_reconstruction(const Tensor& x, const Tensor& x_hat) {
  if (!x.same_shape(x_hat)) throw ShapeError("reconstruction_loss: shape mismatch");
  if (x.rows() == 0) throw BatchError("reconstruction_loss: empty batch");
  for (double v : x_hat.data())
    if (!(v > 0.0)) throw DomainError("reconstruction_loss: non-positive x_hat entry");
}

}  // namespace

double reconstruction_loss(const Tensor& x, const Tensor& x_hat) {
  check_reconstruction(x, x_hat);
  double total = 0.0;
  for (std::size_t d = 0; d < x.rows(); ++d) {
    double row = 0.0;
    for (std::size_t w = 0; w < x.cols(); ++w)
      if (x(d, w) != 0.0) row += x(d, w) * std::log(x_hat(d, w));
    total += row;
  }
  return -total / static_cast<double>(x.rows());
}

Var reconstruction_loss(const Tensor& x, Var x_hat) {
  const double value = reconstruction_loss(x, x_hat.value());
  return x_hat.tape->record(Tensor(1, 1, value), {x_hat}, [x, x_hat](Tape& t, const Tensor& g) {
    const Tensor& xh = t.value(x_hat);
    const double c = -g(0, 0) / static_cast<double>(x.rows());
    Tensor dx(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) dx.data()[i] = c * x.data()[i] / xh.data()[i];
    t.accumulate(x_hat, dx);
  });
}

}  // namespace gtm
