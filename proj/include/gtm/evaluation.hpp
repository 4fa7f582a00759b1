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
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtm/corpus.hpp"
#include "gtm/tensor.hpp"

namespace gtm {

using TokenDocs = std::vector<std::vector<std::string>>;

// Boolean window co-occurrence statistics over a reference corpus.
class CooccurrenceIndex {
 public:
  std::uint64_t total_windows() const noexcept { return total_windows_; }
  // Number of windows containing the word (0 when unindexed).
  std::uint64_t count(const std::string& word) const;
  // Number of windows containing both words. joint(w, w) == count(w).
  std::uint64_t joint(const std::string& a, const std::string& b) const;
  std::optional<std::uint32_t> id(const std::string& word) const;
  std::size_t num_words() const noexcept { return words_.size(); }
  std::size_t num_pairs() const noexcept { return joint_.size(); }

  friend bool operator==(const CooccurrenceIndex&, const CooccurrenceIndex&) = default;

 private:
  friend struct CooccurrenceBuilder;

  static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t{a} << 32) | b;
  }

  std::uint64_t total_windows_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::uint64_t, std::uint64_t> joint_;
};

// Passing this as the window makes every document a single window.
inline constexpr std::size_t kWholeDocument = std::numeric_limits<std::size_t>::max();

// Slides a window of `window` tokens over each document with stride 1; a
// document shorter than the window contributes one window. Presence is
// Boolean per window. Throws ArgumentError on window < 2 or empty input.
CooccurrenceIndex build_cooccurrence(const TokenDocs& reference, std::size_t window);

namespace serial {
// Single-threaded reference; identical output.
CooccurrenceIndex build_cooccurrence(const TokenDocs& reference, std::size_t window);
}  // namespace serial

// Reference documents for the whole-document fallback on bag-of-words data:
// each document becomes its distinct words.
TokenDocs documents_from_corpus(const Corpus& corpus);

inline constexpr double kDefaultNpmiEpsilon = 1e-12;

// ln((p_ij + eps) / (p_i p_j)) / -ln(p_ij + eps), clamped to [-1, 1];
// 0 when p_ij + eps >= 1. A word that occurs in no window scores -1.
double npmi_pair(const CooccurrenceIndex& index, const std::string& w1, const std::string& w2,
                 double eps = kDefaultNpmiEpsilon);

struct TopicScore {
  std::vector<std::size_t> top_ids;
  std::vector<std::string> top_words;
  double npmi = 0.0;
};

struct TopicReport {
  std::vector<TopicScore> topics;
  double mean_npmi = 0.0;
};

// Indices of the top_n largest entries of each row, descending; ties go to
// the lower index. Throws ArgumentError when top_n > row length.
std::vector<std::vector<std::size_t>> top_word_ids(const Tensor& topics, std::size_t top_n);

// Per topic: mean NPMI over all unordered pairs of its top_n words.
TopicReport score_topics(const Tensor& topics, const std::vector<std::string>& vocab,
                         const CooccurrenceIndex& index, std::size_t top_n,
                         double eps = kDefaultNpmiEpsilon);

// Tab-separated: header "topic\tnpmi\twords", one row per topic, then
// "mean\t<value>".
std::string format_report(const TopicReport& report);

}  // namespace gtm
