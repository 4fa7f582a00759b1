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
#include <vector>

#include "gtm/corpus.hpp"
#include "gtm/evaluation.hpp"

namespace gtm {

// Planted-topic generator: disjoint word blocks per topic, per-document
// Dirichlet topic mixtures, uniform word choice within a topic.
struct SyntheticOptions {
  std::size_t topics = 5;
  std::size_t words_per_topic = 40;
  std::size_t docs = 1000;
  std::size_t doc_length = 80;
  double alpha = 0.1;
  std::uint64_t seed = 0;
};

struct SyntheticCorpus {
  Corpus corpus;    // vocab = topic blocks in order, V = topics * words_per_topic
  TokenDocs tokens;  // same documents with token order kept
  // true_topics[k] = word ids of topic k
  std::vector<std::vector<std::size_t>> true_topics;
};

SyntheticCorpus generate_synthetic(const SyntheticOptions& opts);

// Greedy one-to-one matching of learned topics (by their top words) to
// true topics, repeatedly taking the pair with the largest overlap. Returns
// the overlap count of each matched pair, in matching order.
std::vector<std::size_t> greedy_topic_overlap(
    const std::vector<std::vector<std::size_t>>& learned_top,
    const std::vector<std::vector<std::size_t>>& true_topics);

}  // namespace gtm
