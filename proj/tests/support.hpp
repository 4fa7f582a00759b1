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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "gtm/corpus.hpp"
#include "gtm/model.hpp"
#include "gtm/tensor.hpp"

namespace gtm::test {

inline Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Tensor t(rows, cols);
  for (double& v : t.data()) v = u(rng);
  return t;
}

// Rows drawn uniformly from the open simplex.
inline Tensor random_simplex(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Tensor t = random_tensor(rows, cols, rng, 0.05, 1.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (double v : t.row(r)) s += v;
    for (double& v : t.row(r)) v /= s;
  }
  return t;
}

// |a - b| / max(|a|, |b|, floor)
inline double rel_err(double a, double b, double floor = 1e-5) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Central differences of f with respect to every entry of x.
inline Tensor numeric_grad(const std::function<double()>& f, Tensor& x, double h = 1e-5) {
  Tensor g(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x.data()[i];
    x.data()[i] = keep + h;
    const double up = f();
    x.data()[i] = keep - h;
    const double down = f();
    x.data()[i] = keep;
    g.data()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double max_rel_err(const Tensor& analytic, const Tensor& numeric, double floor = 1e-5) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    worst = std::max(worst, rel_err(analytic.data()[i], numeric.data()[i], floor));
  return worst;
}

// The 3-document, 5-word toy corpus used by the model-level checks.
inline Corpus toy_corpus() {
  Corpus c;
  c.vocab = {"apple", "berry", "cherry", "date", "elder"};
  c.docs = {{{0, 2}, {1, 1}}, {{1, 1}, {2, 3}, {3, 1}}, {{3, 2}, {4, 1}}};
  c.validate();
  return c;
}

inline ModelConfig toy_config() {
  ModelConfig m;
  m.n_docs = 3;
  m.n_words = 5;
  m.topics = 2;
  m.enc_hidden = 4;
  m.dec_hidden = 3;
  m.leaky_slope = 0.01;
  return m;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gtm_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace gtm::test
