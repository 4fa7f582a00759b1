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

#include <random>
#include <span>
#include <vector>

#include "gtm/autodiff.hpp"
#include "gtm/tensor.hpp"

namespace gtm {

// Dirichlet prior over the K-simplex.
struct DirichletPrior {
  std::vector<double> alpha;

  static DirichletPrior symmetric(std::size_t topics, double concentration);
  std::size_t dim() const noexcept { return alpha.size(); }
};

struct LossBreakdown {
  double rec = 0.0;
  double mmd = 0.0;  // unbiased estimate, may be negative
  double total = 0.0;
  double lambda = 1.0;
};

// Rows drawn i.i.d. by normalizing independent Gamma(alpha_k, 1) draws.
Tensor sample_dirichlet(const DirichletPrior& prior, std::size_t n, std::mt19937_64& rng);

// exp(-arccos^2(sum_k sqrt(z_k z'_k))), argument clamped to [0, 1]. Both
// inputs must lie on the simplex within 1e-6, else DomainError.
double diffusion_kernel(std::span<const double> z, std::span<const double> z_prime);

// Unbiased MMD estimate between prior samples (m x K) and posterior
// samples (n x K) under the diffusion kernel. Requires m, n >= 2.
double mmd(const Tensor& z_prior, const Tensor& z_post);
// Same, differentiable with respect to z_post.
Var mmd(const Tensor& z_prior, Var z_post);

// -mean_d sum_w x_dw * ln(xhat_dw). xhat must be strictly positive.
double reconstruction_loss(const Tensor& x, const Tensor& x_hat);
Var reconstruction_loss(const Tensor& x, Var x_hat);

}  // namespace gtm
