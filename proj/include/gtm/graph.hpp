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

#include <cstdint>
#include <optional>
#include <vector>

#include "gtm/corpus.hpp"
#include "gtm/sparse.hpp"

namespace gtm {

// Document-word graph. Documents occupy node indices [0, D), words
// [D, D + V). The underlying adjacency A holds TF-IDF weights on doc-word
// edges (both directions) and 1 on the diagonal; adj_norm stores
// D^{-1/2} A D^{-1/2}.
struct CorpusGraph {
  std::size_t n_docs = 0;
  std::size_t n_words = 0;
  SparseMatrix adj_norm;
  std::vector<double> degrees;

  std::size_t num_nodes() const noexcept { return n_docs + n_words; }
};

// Induced subgraph over a set of documents plus every word node. Local
// layout mirrors the global one: sampled documents first (in the order
// given), then all V words.
struct SubgraphBatch {
  std::vector<std::size_t> doc_node_ids;
  SparseMatrix adj_norm_sub;
  std::vector<double> degrees;
  // global_nodes[local] = global node index
  std::vector<std::size_t> global_nodes;

  std::size_t num_docs() const noexcept { return doc_node_ids.size(); }
  std::size_t num_nodes() const noexcept { return global_nodes.size(); }
  std::optional<std::size_t> local_index(std::size_t global) const;
};

CorpusGraph build_graph(const TfidfMatrix& tfidf);

// Degrees are recomputed on the induced subgraph. Throws ArgumentError on
// empty, duplicate or out-of-range ids.
SubgraphBatch sample_subgraph(const CorpusGraph& graph, const TfidfMatrix& tfidf,
                              const std::vector<std::size_t>& doc_ids);

// Seeded shuffle of [0, n_docs) cut into ceil(n_docs / batch_size) chunks;
// the final chunk may be short.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n_docs,
                                                    std::size_t batch_size,
                                                    std::uint64_t rng_seed);

}  // namespace gtm
