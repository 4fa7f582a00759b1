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
#include <filesystem>
#include <string>
#include <vector>

namespace gtm {

// One (word, value) pair of a sparse document row; rows are sorted by word.
template <typename T>
struct SparseEntry {
  std::uint32_t word;
  T value;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using CountRow = std::vector<SparseEntry<std::uint32_t>>;
using WeightRow = std::vector<SparseEntry<double>>;

// Vocabulary plus per-document sparse term counts.
struct Corpus {
  std::vector<std::string> vocab;
  std::vector<CountRow> docs;
  std::vector<std::string> doc_ids;  // optional, may be empty

  std::size_t vocab_size() const noexcept { return vocab.size(); }
  std::size_t num_docs() const noexcept { return docs.size(); }
  std::uint64_t num_tokens() const;

  // Throws CorpusError if any invariant is violated.
  void validate() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

enum class CorpusFormat { kBow, kTokens };

CorpusFormat parse_format(const std::string& name);

// `bow`: header "V D", then D lines of "word:count" pairs; word strings
// come from the vocabulary sidecar. `tokens`: one whitespace-tokenized
// document per line, vocabulary built in first-appearance order.
Corpus parse_bow(const std::string& text, std::vector<std::string> vocab);
Corpus parse_tokens(const std::string& text);

// Reads a vocabulary sidecar: one word per line.
std::vector<std::string> load_vocab(const std::filesystem::path& path);

// For `bow` the sidecar defaults to <path>.vocab when `vocab_path` is empty.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const std::filesystem::path& vocab_path = {});

// Reads a `tokens` file as raw token sequences (used as NPMI reference).
std::vector<std::vector<std::string>> load_token_documents(const std::filesystem::path& path);

std::string format_bow(const Corpus& corpus);
std::string format_vocab(const std::vector<std::string>& vocab);

// Max-normalized TF-IDF rows, same sparsity pattern as the corpus counts.
struct TfidfMatrix {
  std::size_t vocab_size = 0;
  std::vector<WeightRow> rows;

  std::size_t num_docs() const noexcept { return rows.size(); }
};

// weight(d, w) = tf * idf / max over the document, tf = raw count,
// idf(w) = ln((1 + D) / (1 + df(w))) + 1.
TfidfMatrix compute_tfidf(const Corpus& corpus);

std::string read_file(const std::filesystem::path& path);

}  // namespace gtm
