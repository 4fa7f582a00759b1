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

// Data-parallel inner loops used by the autodiff ops and the objectives.
//
// Every kernel exists twice: `serial` is the straight-line reference kept
// for testing and benchmarking, `omp` splits the work across OpenMP threads.
// Parallelism is only ever over independent output rows and every output
// element is accumulated in the same order in both variants, so the two are
// bit-identical for any thread count. Training determinism relies on this.

#include <cstddef>

#include "gtm/sparse.hpp"
#include "gtm/tensor.hpp"

namespace gtm::kernels {

struct MmdResult {
  double value = 0.0;
  // d value / d post, same shape as post. Empty unless requested.
  Tensor grad_post;
};

namespace serial {

Tensor matmul(const Tensor& a, const Tensor& b);       // a * b
Tensor matmul_at_b(const Tensor& a, const Tensor& b);  // a^T * b
Tensor matmul_a_bt(const Tensor& a, const Tensor& b);  // a * b^T
Tensor spmm(const SparseMatrix& s, const Tensor& b);
Tensor softmax_rows(const Tensor& x);
// out(i, j) = exp(-arccos^2(clamp(sum_k sqrt(x_ik * y_jk), 0, 1)))
Tensor diffusion_gram(const Tensor& x, const Tensor& y);
MmdResult mmd(const Tensor& prior, const Tensor& post, bool with_grad);

}  // namespace serial

namespace omp {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor matmul_at_b(const Tensor& a, const Tensor& b);
Tensor matmul_a_bt(const Tensor& a, const Tensor& b);
Tensor spmm(const SparseMatrix& s, const Tensor& b);
Tensor softmax_rows(const Tensor& x);
Tensor diffusion_gram(const Tensor& x, const Tensor& y);
MmdResult mmd(const Tensor& prior, const Tensor& post, bool with_grad);

}  // namespace omp

// Number of OpenMP threads the omp kernels will use (1 without OpenMP).
int max_threads();

// Scalar helpers shared by both kernel variants.
namespace detail {

// Diffusion kernel value from the Bhattacharyya sum s = sum_k sqrt(a_k b_k).
double diffusion_from_affinity(double s);

// d k / d s divided by 2, i.e. k * theta / sin(theta) with theta = arccos(s).
// Uses the interior limit 1 at theta = 0 so identical points stay smooth.
double diffusion_slope(double s);

}  // namespace detail

}  // namespace gtm::kernels
