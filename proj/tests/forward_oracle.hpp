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

#include <cmath>
#include <random>
#include <vector>

#include "gtm/model.hpp"
#include "support.hpp"

namespace gtm::test {

// Straight-line forward pass over plain loops: dense adjacency, explicit
// batch norm, explicit softmax. Shares nothing with the library beyond the
// parameter layout.
struct Oracle {
  using Mat = std::vector<std::vector<double>>;

  static Mat from(const Tensor& t) {
    Mat m(t.rows(), std::vector<double>(t.cols()));
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < t.cols(); ++j) m[i][j] = t(i, j);
    return m;
  }
  static Mat mul(const Mat& a, const Mat& b) {
    Mat c(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b[0].size(); ++j)
        for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
  }
  static void leaky(Mat& m, double s) {
    for (auto& r : m)
      for (double& v : r) v = v > 0 ? v : s * v;
  }
  static void bias(Mat& m, const Tensor& b) {
    for (auto& r : m)
      for (std::size_t j = 0; j < r.size(); ++j) r[j] += b(0, j);
  }
  static void bn(Mat& m, const BatchNormLayer& layer, Mode mode) {
    const std::size_t n = m.size(), c = m[0].size();
    for (std::size_t j = 0; j < c; ++j) {
      double mean = layer.state.running_mean(0, j), var = layer.state.running_var(0, j);
      if (mode == Mode::kTrain) {
        mean = 0;
        for (std::size_t i = 0; i < n; ++i) mean += m[i][j];
        mean /= n;
        var = 0;
        for (std::size_t i = 0; i < n; ++i) var += (m[i][j] - mean) * (m[i][j] - mean);
        var /= n;
      }
      for (std::size_t i = 0; i < n; ++i)
        m[i][j] = layer.gamma(0, j) * (m[i][j] - mean) / std::sqrt(var + 1e-5) + layer.beta(0, j);
    }
  }
  static void softmax(Mat& m) {
    for (auto& r : m) {
      double mx = r[0];
      for (double v : r) mx = std::max(mx, v);
      double s = 0;
      for (double& v : r) s += (v = std::exp(v - mx));
      for (double& v : r) v /= s;
    }
  }

  static Mat encode(const ModelParams& p, const Tensor& adj_dense, const std::vector<std::size_t>& nodes,
                    std::size_t n_docs, Mode mode) {
    Mat x(nodes.size(), std::vector<double>(p.config.num_nodes(), 0.0));
    for (std::size_t i = 0; i < nodes.size(); ++i) x[i][nodes[i]] = 1.0;  // one-hot features
    const Mat a = from(adj_dense);
    Mat h = mul(mul(a, x), from(p.enc_w0));
    leaky(h, p.config.leaky_slope);
    bn(h, p.enc_bn0, mode);
    h = mul(mul(a, h), from(p.enc_w1));
    leaky(h, p.config.leaky_slope);
    bn(h, p.enc_bn1, mode);
    h.resize(n_docs);
    softmax(h);
    return h;
  }

  static Mat decode(const ModelParams& p, const Mat& z, Mode mode) {
    Mat h = mul(z, from(p.dec_w0));
    bias(h, p.dec_b0);
    leaky(h, p.config.leaky_slope);
    bn(h, p.dec_bn0, mode);
    h = mul(h, from(p.dec_w1));
    bias(h, p.dec_b1);
    softmax(h);
    return h;
  }
};

inline double max_diff(const Oracle::Mat& a, const Tensor& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) d = std::max(d, std::abs(a[i][j] - b(i, j)));
  return d;
}

// Toy parameters with every tensor perturbed away from its initial value.
inline ModelParams toy_params(std::uint64_t seed) {
  ModelParams p = init_params(toy_config(), seed);
  std::mt19937_64 rng(seed + 1000);
  for (BatchNormLayer* bn : {&p.enc_bn0, &p.enc_bn1, &p.dec_bn0}) {
    bn->gamma = random_tensor(1, bn->gamma.cols(), rng, 0.5, 1.5);
    bn->beta = random_tensor(1, bn->beta.cols(), rng, -0.5, 0.5);
    bn->state.running_mean = random_tensor(1, bn->gamma.cols(), rng, -0.3, 0.3);
    bn->state.running_var = random_tensor(1, bn->gamma.cols(), rng, 0.5, 2.0);
  }
  p.dec_b0 = random_tensor(1, p.dec_b0.cols(), rng, -0.2, 0.2);
  p.dec_b1 = random_tensor(1, p.dec_b1.cols(), rng, -0.2, 0.2);
  return p;
}


}  // namespace gtm::test
