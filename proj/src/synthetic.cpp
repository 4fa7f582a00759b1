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

#include "gtm/synthetic.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "gtm/errors.hpp"
#include "gtm/objectives.hpp"

namespace gtm {

SyntheticCorpus generate_synthetic(const SyntheticOptions& opts) {
  if (opts.topics < 1 || opts.words_per_topic < 1 || opts.docs < 2 || opts.doc_length < 1)
    throw ArgumentError("synthetic corpus needs topics, words, >= 2 docs and tokens");

  SyntheticCorpus out;
  const std::size_t v = opts.topics * opts.words_per_topic;
  out.corpus.vocab.reserve(v);
  for (std::size_t k = 0; k < opts.topics; ++k) {
    std::vector<std::size_t> block;
    for (std::size_t j = 0; j < opts.words_per_topic; ++j) {
      block.push_back(out.corpus.vocab.size());
      out.corpus.vocab.push_back("t" + std::to_string(k) + "w" + std::to_string(j));
    }
    out.true_topics.push_back(std::move(block));
  }

  std::mt19937_64 rng(opts.seed);
  const DirichletPrior prior = DirichletPrior::symmetric(opts.topics, opts.alpha);
  std::uniform_int_distribution<std::size_t> pick_word(0, opts.words_per_topic - 1);
  for (std::size_t d = 0; d < opts.docs; ++d) {
    const Tensor theta = sample_dirichlet(prior, 1, rng);
    std::discrete_distribution<std::size_t> pick_topic(theta.data().begin(), theta.data().end());
    std::vector<std::string> doc;
    std::vector<std::uint32_t> counts(v, 0);
    for (std::size_t t = 0; t < opts.doc_length; ++t) {
      const std::size_t w = out.true_topics[pick_topic(rng)][pick_word(rng)];
      doc.push_back(out.corpus.vocab[w]);
      ++counts[w];
    }
    CountRow row;
    for (std::size_t w = 0; w < v; ++w)
      if (counts[w]) row.push_back({static_cast<std::uint32_t>(w), counts[w]});
    out.corpus.docs.push_back(std::move(row));
    out.tokens.push_back(std::move(doc));
  }
  out.corpus.validate();
  return out;
}

std::vector<std::size_t> greedy_topic_overlap(
    const std::vector<std::vector<std::size_t>>& learned_top,
    const std::vector<std::vector<std::size_t>>& true_topics) {
  const std::size_t nl = learned_top.size();
  const std::size_t nt = true_topics.size();
  std::vector<std::vector<std::size_t>> overlap(nl, std::vector<std::size_t>(nt, 0));
  for (std::size_t i = 0; i < nl; ++i) {
    std::set<std::size_t> words(learned_top[i].begin(), learned_top[i].end());
    for (std::size_t j = 0; j < nt; ++j)
      for (std::size_t w : true_topics[j]) overlap[i][j] += words.count(w);
  }

  std::vector<bool> used_l(nl, false), used_t(nt, false);
  std::vector<std::size_t> matched;
  for (std::size_t step = 0; step < std::min(nl, nt); ++step) {
    std::size_t bi = 0, bj = 0, best = 0;
    bool found = false;
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = 0; j < nt; ++j)
        if (!used_l[i] && !used_t[j] && (!found || overlap[i][j] > best)) {
          bi = i;
          bj = j;
          best = overlap[i][j];
          found = true;
        }
    used_l[bi] = used_t[bj] = true;
    matched.push_back(best);
  }
  return matched;
}

}  // namespace gtm
