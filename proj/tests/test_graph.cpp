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

#include <doctest.h>

#include <cmath>
#include <set>

#include "gtm/errors.hpp"
#include "gtm/graph.hpp"
#include "support.hpp"

using namespace gtm;

namespace {

// Dense A, D and D^{-1/2} A D^{-1/2} materialized literally for the given
// documents followed by every word.
Tensor dense_normalized(const TfidfMatrix& tfidf, const std::vector<std::size_t>& docs) {
  const std::size_t b = docs.size();
  const std::size_t n = b + tfidf.vocab_size;
  Tensor a = Tensor::identity(n);
  for (std::size_t i = 0; i < b; ++i)
    for (const auto& e : tfidf.rows[docs[i]]) {
      a(i, b + e.word) = e.value;
      a(b + e.word, i) = e.value;
    }
  Tensor dinv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
    dinv(i, i) = 1.0 / std::sqrt(deg);
  }
  Tensor tmp(n, n), out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) tmp(i, j) += dinv(i, k) * a(k, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out(i, j) += tmp(i, k) * dinv(k, j);
  return out;
}

TfidfMatrix small_tfidf() {
  return compute_tfidf(parse_bow("3 2\n0:2 1:1\n1:1 2:3\n", {"a", "b", "c"}));
}

}  // namespace

TEST_CASE("two-node graph") {
  TfidfMatrix t;
  t.vocab_size = 1;
  t.rows = {{{0, 1.0}}};
  const CorpusGraph g = build_graph(t);
  CHECK(g.degrees == std::vector<double>{2.0, 2.0});
  CHECK(g.adj_norm.to_dense() == Tensor::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
}

TEST_CASE("unused word is an isolated self-loop") {
  TfidfMatrix t;
  t.vocab_size = 3;
  t.rows = {{{0, 1.0}}, {{0, 0.5}, {1, 1.0}}};
  const CorpusGraph g = build_graph(t);
  const Tensor dense = g.adj_norm.to_dense();
  const std::size_t w = 2 + 2;
  for (std::size_t j = 0; j < g.num_nodes(); ++j) {
    CHECK(dense(w, j) == (j == w ? 1.0 : 0.0));
    CHECK(dense(j, w) == (j == w ? 1.0 : 0.0));
  }
}

TEST_CASE("normalized adjacency matches dense oracle") {
  const TfidfMatrix t = small_tfidf();
  const CorpusGraph g = build_graph(t);
  const Tensor expected = dense_normalized(t, {0, 1});
  CHECK(max_abs_diff(g.adj_norm.to_dense(), expected) < 1e-15);
  // Symmetric and nonnegative.
  const Tensor d = g.adj_norm.to_dense();
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      CHECK(d(i, j) == d(j, i));
      CHECK(d(i, j) >= 0.0);
    }
}

TEST_CASE("full batch reproduces the global graph") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> cnt(0, 3);
  Corpus c;
  for (int w = 0; w < 15; ++w) c.vocab.push_back("w" + std::to_string(w));
  for (int d = 0; d < 9; ++d) {
    CountRow row{{static_cast<std::uint32_t>(d), 1}};
    for (std::uint32_t w = 9; w < 15; ++w)
      if (int k = cnt(rng)) row.push_back({w, static_cast<std::uint32_t>(k)});
    c.docs.push_back(row);
  }
  const TfidfMatrix t = compute_tfidf(c);
  const CorpusGraph g = build_graph(t);
  const SubgraphBatch full = sample_subgraph(g, t, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(full.adj_norm_sub == g.adj_norm);

  // Shuffled order: same values up to index mapping.
  const SubgraphBatch perm = sample_subgraph(g, t, {5, 2, 8, 0, 1, 7, 3, 6, 4});
  CHECK(perm.adj_norm_sub.nnz() == g.adj_norm.nnz());
  for (const Triplet& e : g.adj_norm.triplets()) {
    const auto i = perm.local_index(e.row);
    const auto j = perm.local_index(e.col);
    REQUIRE(i.has_value());
    REQUIRE(j.has_value());
    CHECK(perm.adj_norm_sub.at(*i, *j) == e.value);
  }
}

TEST_CASE("single-document subgraph matches dense oracle") {
  const TfidfMatrix t = small_tfidf();
  const CorpusGraph g = build_graph(t);
  const SubgraphBatch b = sample_subgraph(g, t, {0});
  CHECK(b.global_nodes == std::vector<std::size_t>{0, 2, 3, 4});
  CHECK(max_abs_diff(b.adj_norm_sub.to_dense(), dense_normalized(t, {0})) < 1e-15);
  CHECK(b.local_index(1) == std::nullopt);
  CHECK(b.local_index(3) == std::optional<std::size_t>{2});
}

TEST_CASE("subgraph argument errors") {
  const TfidfMatrix t = small_tfidf();
  const CorpusGraph g = build_graph(t);
  CHECK_THROWS_AS(sample_subgraph(g, t, {0, 0}), ArgumentError);
  CHECK_THROWS_AS(sample_subgraph(g, t, {}), ArgumentError);
  CHECK_THROWS_AS(sample_subgraph(g, t, {2}), ArgumentError);
}

TEST_CASE("epoch batches partition the documents") {
  const auto b = epoch_batches(5, 2, 99);
  REQUIRE(b.size() == 3);
  CHECK(b[0].size() == 2);
  CHECK(b[1].size() == 2);
  CHECK(b[2].size() == 1);
  std::set<std::size_t> all;
  for (const auto& batch : b) all.insert(batch.begin(), batch.end());
  CHECK(all == std::set<std::size_t>{0, 1, 2, 3, 4});

  CHECK(epoch_batches(5, 7, 1).size() == 1);
  CHECK(epoch_batches(5, 7, 1)[0].size() == 5);
  CHECK(epoch_batches(50, 8, 3) == epoch_batches(50, 8, 3));
  CHECK(epoch_batches(50, 8, 3) != epoch_batches(50, 8, 4));
  CHECK_THROWS_AS(epoch_batches(5, 0, 1), ArgumentError);
}
