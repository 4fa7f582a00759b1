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

#include "gtm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gtm/errors.hpp"

namespace gtm {

std::uint64_t CooccurrenceIndex::count(const std::string& word) const {
  auto i = id(word);
  return i ? counts_[*i] : 0;
}

std::uint64_t CooccurrenceIndex::joint(const std::string& a, const std::string& b) const {
  auto ia = id(a);
  auto ib = id(b);
  if (!ia || !ib) return 0;
  if (*ia == *ib) return counts_[*ia];
  auto it = joint_.find(pair_key(*ia, *ib));
  return it == joint_.end() ? 0 : it->second;
}

std::optional<std::uint32_t> CooccurrenceIndex::id(const std::string& word) const {
  auto it = ids_.find(word);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

struct CooccurrenceBuilder {
  struct Partial {
    std::uint64_t windows = 0;
    std::vector<std::uint64_t> counts;
    std::unordered_map<std::uint64_t, std::uint64_t> joint;
  };

  static void count_document(const std::vector<std::uint32_t>& doc, std::size_t window,
                             Partial& acc) {
    const std::size_t len = doc.size();
    const std::size_t span = std::min(window, len);
    const std::size_t n_windows = len <= window ? 1 : len - window + 1;
    std::vector<std::uint32_t> present;
    present.reserve(span);
    for (std::size_t s = 0; s < n_windows; ++s) {
      present.assign(doc.begin() + static_cast<std::ptrdiff_t>(s),
                     doc.begin() + static_cast<std::ptrdiff_t>(s + span));
      std::sort(present.begin(), present.end());
      present.erase(std::unique(present.begin(), present.end()), present.end());
      ++acc.windows;
      for (std::size_t i = 0; i < present.size(); ++i) {
        ++acc.counts[present[i]];
        for (std::size_t j = i + 1; j < present.size(); ++j)
          ++acc.joint[CooccurrenceIndex::pair_key(present[i], present[j])];
      }
    }
  }

  static CooccurrenceIndex build(const TokenDocs& reference, std::size_t window, bool parallel) {
    if (window < 2) throw ArgumentError("co-occurrence window must be >= 2");
    if (reference.empty()) throw ArgumentError("reference corpus is empty");

    CooccurrenceIndex index;
    std::vector<std::vector<std::uint32_t>> docs;
    docs.reserve(reference.size());
    for (const auto& doc : reference) {
      std::vector<std::uint32_t> ids;
      ids.reserve(doc.size());
      for (const auto& tok : doc) {
        auto [it, inserted] =
            index.ids_.try_emplace(tok, static_cast<std::uint32_t>(index.words_.size()));
        if (inserted) index.words_.push_back(tok);
        ids.push_back(it->second);
      }
      if (!ids.empty()) docs.push_back(std::move(ids));
    }
    if (docs.empty()) throw ArgumentError("reference corpus has no tokens");

    const std::size_t v = index.words_.size();
    Partial total;
    total.counts.assign(v, 0);

    if (!parallel) {
      for (const auto& doc : docs) count_document(doc, window, total);
    } else {
#pragma omp parallel
      {
        Partial local;
        local.counts.assign(v, 0);
#pragma omp for schedule(dynamic, 16)
        for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(docs.size()); ++d)
          count_document(docs[static_cast<std::size_t>(d)], window, local);
#pragma omp critical(gtm_cooccurrence_merge)
        {
          total.windows += local.windows;
          for (std::size_t w = 0; w < v; ++w) total.counts[w] += local.counts[w];
          for (const auto& [key, n] : local.joint) total.joint[key] += n;
        }
      }
    }
    index.total_windows_ = total.windows;
    index.counts_ = std::move(total.counts);
    index.joint_ = std::move(total.joint);
    return index;
  }
};

CooccurrenceIndex build_cooccurrence(const TokenDocs& reference, std::size_t window) {
  return CooccurrenceBuilder::build(reference, window, true);
}

namespace serial {
CooccurrenceIndex build_cooccurrence(const TokenDocs& reference, std::size_t window) {
  return CooccurrenceBuilder::build(reference, window, false);
}
}  // namespace serial

TokenDocs documents_from_corpus(const Corpus& corpus) {
  TokenDocs docs;
  docs.reserve(corpus.num_docs());
  for (const auto& row : corpus.docs) {
    std::vector<std::string> doc;
    doc.reserve(row.size());
    for (const auto& e : row) doc.push_back(corpus.vocab[e.word]);
    docs.push_back(std::move(doc));
  }
  return docs;
}

double npmi_pair(const CooccurrenceIndex& index, const std::string& w1, const std::string& w2,
                 double eps) {
  const std::uint64_t c1 = index.count(w1);
  const std::uint64_t c2 = index.count(w2);
  if (c1 == 0 || c2 == 0) return -1.0;
  const double total = static_cast<double>(index.total_windows());
  const double p1 = static_cast<double>(c1) / total;
  const double p2 = static_cast<double>(c2) / total;
  const double p12 = static_cast<double>(index.joint(w1, w2)) / total + eps;
  if (p12 >= 1.0) return 0.0;
  if (p12 <= 0.0) return -1.0;
  const double value = std::log(p12 / (p1 * p2)) / -std::log(p12);
  return std::clamp(value, -1.0, 1.0);
}

std::vector<std::vector<std::size_t>> top_word_ids(const Tensor& topics, std::size_t top_n) {
  if (top_n > topics.cols()) {
    throw ArgumentError("top_n (" + std::to_string(top_n) + ") exceeds vocabulary size (" +
                        std::to_string(topics.cols()) + ")");
  }
  std::vector<std::vector<std::size_t>> out;
  out.reserve(topics.rows());
  std::vector<std::size_t> order(topics.cols());
  for (std::size_t k = 0; k < topics.rows(); ++k) {
    std::iota(order.begin(), order.end(), 0);
    auto row = topics.row(k);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_n),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        return row[a] != row[b] ? row[a] > row[b] : a < b;
                      });
    out.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top_n));
  }
  return out;
}

TopicReport score_topics(const Tensor& topics, const std::vector<std::string>& vocab,
                         const CooccurrenceIndex& index, std::size_t top_n, double eps) {
  if (top_n < 2) throw ArgumentError("top_n must be >= 2");
  if (vocab.size() != topics.cols()) {
    throw ArgumentError("vocabulary has " + std::to_string(vocab.size()) +
                        " words but topics have " + std::to_string(topics.cols()) + " columns");
  }
  TopicReport report;
  double sum = 0.0;
  for (auto& ids : top_word_ids(topics, top_n)) {
    TopicScore ts;
    for (std::size_t w : ids) ts.top_words.push_back(vocab[w]);
    double acc = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < ts.top_words.size(); ++i)
      for (std::size_t j = i + 1; j < ts.top_words.size(); ++j, ++pairs)
        acc += npmi_pair(index, ts.top_words[i], ts.top_words[j], eps);
    ts.npmi = acc / static_cast<double>(pairs);
    ts.top_ids = std::move(ids);
    sum += ts.npmi;
    report.topics.push_back(std::move(ts));
  }
  report.mean_npmi = report.topics.empty() ? 0.0 : sum / static_cast<double>(report.topics.size());
  return report;
}

std::string format_report(const TopicReport& report) {
  std::string out = "topic\tnpmi\twords\n";
  char buf[64];
  for (std::size_t k = 0; k < report.topics.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.6f", report.topics[k].npmi);
    out += std::to_string(k) + "\t" + buf + "\t";
    const auto& words = report.topics[k].top_words;
    for (std::size_t i = 0; i < words.size(); ++i) out += (i ? " " : "") + words[i];
    out += "\n";
  }
  std::snprintf(buf, sizeof buf, "%.6f", report.mean_npmi);
  out += std::string("mean\t") + buf + "\n";
  return out;
}

}  // namespace gtm
