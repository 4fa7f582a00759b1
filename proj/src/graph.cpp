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

#include "gtm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gtm/errors.hpp"

namespace gtm {

namespace {

struct Assembled {
  SparseMatrix adj;
  std::vector<double> degrees;
};

// Normalized adjacency over `docs` (local order as given) plus all words.
// Degree sums run over ascending global document index regardless of the
// local order, so any permutation of the same document set yields
// bit-identical values.
Assembled assemble(const TfidfMatrix& tfidf, const std::vector<std::size_t>& docs) {
  const std::size_t b = docs.size();
  const std::size_t v = tfidf.vocab_size;
  const std::size_t n = b + v;

  std::vector<std::size_t> order(b);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return docs[x] < docs[y]; });

  std::vector<double> deg(n, 1.0);
  for (std::size_t local : order)
    for (const auto& e : tfidf.rows[docs[local]]) {
      deg[local] += e.value;
      deg[b + e.word] += e.value;
    }

  std::vector<Triplet> entries;
  std::size_t nnz = n;
  for (std::size_t d : docs) nnz += 2 * tfidf.rows[d].size();
  entries.reserve(nnz);
  auto norm = [&](std::size_t i, std::size_t j, double a) {
    return a / std::sqrt(deg[i] * deg[j]);
  };
  for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, norm(i, i, 1.0)});
  for (std::size_t local = 0; local < b; ++local)
    for (const auto& e : tfidf.rows[docs[local]]) {
      const std::size_t w = b + e.word;
      const double val = norm(local, w, e.value);
      entries.push_back({local, w, val});
      entries.push_back({w, local, val});
    }
  return {SparseMatrix::from_triplets(n, n, std::move(entries)), std::move(deg)};
}

}  // namespace

std::optional<std::size_t> SubgraphBatch::local_index(std::size_t global) const {
  const std::size_t b = doc_node_ids.size();
  // Word nodes keep their relative order after the documents.
  if (b < global_nodes.size() && global >= global_nodes[b]) {
    const std::size_t local = b + (global - global_nodes[b]);
    if (local < global_nodes.size()) return local;
    return std::nullopt;
  }
  for (std::size_t i = 0; i < b; ++i)
    if (doc_node_ids[i] == global) return i;
  return std::nullopt;
}

CorpusGraph build_graph(const TfidfMatrix& tfidf) {
  std::vector<std::size_t> all(tfidf.num_docs());
  std::iota(all.begin(), all.end(), 0);
  Assembled a = assemble(tfidf, all);
  CorpusGraph g;
  g.n_docs = tfidf.num_docs();
  g.n_words = tfidf.vocab_size;
  g.adj_norm = std::move(a.adj);
  g.degrees = std::move(a.degrees);
  return g;
}

SubgraphBatch sample_subgraph(const CorpusGraph& graph, const TfidfMatrix& tfidf,
                              const std::vector<std::size_t>& doc_ids) {
  if (tfidf.num_docs() != graph.n_docs || tfidf.vocab_size != graph.n_words)
    throw ArgumentError("TF-IDF matrix does not match the graph dimensions");
  if (doc_ids.empty()) throw ArgumentError("sample_subgraph: empty document list");
  std::vector<bool> seen(graph.n_docs, false);
  for (std::size_t d : doc_ids) {
    if (d >= graph.n_docs)
      throw ArgumentError("sample_subgraph: document " + std::to_string(d) + " out of range");
    if (seen[d]) throw ArgumentError("sample_subgraph: duplicate document " + std::to_string(d));
    seen[d] = true;
  }

  Assembled a = assemble(tfidf, doc_ids);
  SubgraphBatch batch;
  batch.doc_node_ids = doc_ids;
  batch.adj_norm_sub = std::move(a.adj);
  batch.degrees = std::move(a.degrees);
  batch.global_nodes = doc_ids;
  batch.global_nodes.reserve(doc_ids.size() + graph.n_words);
  for (std::size_t w = 0; w < graph.n_words; ++w) batch.global_nodes.push_back(graph.n_docs + w);
  return batch;
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n_docs,
                                                    std::size_t batch_size,
                                                    std::uint64_t rng_seed) {
  if (batch_size == 0) throw ArgumentError("batch_size must be >= 1");
  std::vector<std::size_t> perm(n_docs);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(rng_seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < n_docs; start += batch_size) {
    const std::size_t end = std::min(n_docs, start + batch_size);
    out.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                     perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace gtm
