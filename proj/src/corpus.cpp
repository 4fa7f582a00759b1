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

#include "gtm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gtm/errors.hpp"

namespace gtm {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg, line);
}

}  // namespace

std::uint64_t Corpus::num_tokens() const {
  std::uint64_t n = 0;
  for (const auto& d : docs)
    for (const auto& e : d) n += e.value;
  return n;
}

void Corpus::validate() const {
  if (vocab.size() < 2)
    throw CorpusError("vocabulary size " + std::to_string(vocab.size()) + " < 2");
  if (docs.size() < 2)
    throw CorpusError("corpus has " + std::to_string(docs.size()) + " documents, need >= 2");
  if (!doc_ids.empty() && doc_ids.size() != docs.size())
    throw CorpusError("doc_ids length does not match document count");
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const CountRow& row = docs[d];
    if (row.empty()) throw CorpusError("document " + std::to_string(d) + " is empty");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].word >= vocab.size())
        throw CorpusError("document " + std::to_string(d) + " references word " +
                          std::to_string(row[i].word) + " outside vocabulary");
      if (row[i].value == 0)
        throw CorpusError("document " + std::to_string(d) + " stores a zero count");
      if (i > 0 && row[i - 1].word >= row[i].word)
        throw CorpusError("document " + std::to_string(d) + " row is not sorted/unique");
    }
  }
}

CorpusFormat parse_format(const std::string& name) {
  if (name == "bow") return CorpusFormat::kBow;
  if (name == "tokens") return CorpusFormat::kTokens;
  throw ArgumentError("unknown corpus format '" + name + "' (expected bow or tokens)");
}

Corpus parse_bow(const std::string& text, std::vector<std::string> vocab) {
  const auto lines = split_lines(text);
  if (lines.empty()) parse_fail(1, "missing header \"V D\"");

  const auto header = split_ws(lines[0]);
  std::size_t v = 0, d = 0;
  if (header.size() != 2 || !parse_uint(header[0], v) || !parse_uint(header[1], d))
    parse_fail(1, "malformed header, expected \"V D\"");

  std::size_t last = lines.size();
  while (last > 1 && split_ws(lines[last - 1]).empty() && last - 1 > d) --last;
  if (last - 1 != d)
    parse_fail(last, "header declares " + std::to_string(d) + " documents, found " +
                         std::to_string(last - 1));

  Corpus c;
  c.vocab = std::move(vocab);
  if (c.vocab.size() != v)
    throw CorpusError("vocabulary has " + std::to_string(c.vocab.size()) +
                      " words but header declares V=" + std::to_string(v));
  c.docs.reserve(d);
  for (std::size_t i = 1; i < last; ++i) {
    CountRow row;
    for (std::string_view tok : split_ws(lines[i])) {
      const auto colon = tok.find(':');
      std::uint32_t word = 0, count = 0;
      if (colon == std::string_view::npos || !parse_uint(tok.substr(0, colon), word) ||
          !parse_uint(tok.substr(colon + 1), count)) {
        parse_fail(i + 1, "malformed pair '" + std::string(tok) + "', expected wordIndex:count");
      }
      if (word >= v)
        parse_fail(i + 1, "word index " + std::to_string(word) + " >= V=" + std::to_string(v));
      if (count == 0) parse_fail(i + 1, "zero count for word " + std::to_string(word));
      row.push_back({word, count});
    }
    std::sort(row.begin(), row.end(), [](auto& a, auto& b) { return a.word < b.word; });
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k - 1].word == row[k].word)
        parse_fail(i + 1, "duplicate word index " + std::to_string(row[k].word));
    if (row.empty()) throw CorpusError("document " + std::to_string(i - 1) + " is empty");
    c.docs.push_back(std::move(row));
  }
  std::unordered_set<std::string> seen;
  for (const auto& w : c.vocab)
    if (!seen.insert(w).second) throw CorpusError("duplicate vocabulary word '" + w + "'");
  c.validate();
  return c;
}

Corpus parse_tokens(const std::string& text) {
  Corpus c;
  std::unordered_map<std::string, std::uint32_t> index;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::unordered_map<std::uint32_t, std::uint32_t> counts;
    for (std::string_view tok : split_ws(lines[i])) {
      auto [it, inserted] =
          index.try_emplace(std::string(tok), static_cast<std::uint32_t>(c.vocab.size()));
      if (inserted) c.vocab.emplace_back(tok);
      ++counts[it->second];
    }
    if (counts.empty()) throw CorpusError("document " + std::to_string(i) + " is empty");
    CountRow row;
    row.reserve(counts.size());
    for (auto [w, n] : counts) row.push_back({w, n});
    std::sort(row.begin(), row.end(), [](auto& a, auto& b) { return a.word < b.word; });
    c.docs.push_back(std::move(row));
  }
  c.validate();
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> load_vocab(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::string> vocab;
  for (std::string_view line : split_lines(text)) vocab.emplace_back(line);
  return vocab;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const std::filesystem::path& vocab_path) {
  const std::string text = read_file(path);
  if (format == CorpusFormat::kTokens) return parse_tokens(text);
  std::filesystem::path vp = vocab_path;
  if (vp.empty()) vp = std::filesystem::path(path.string() + ".vocab");
  return parse_bow(text, load_vocab(vp));
}

std::vector<std::vector<std::string>> load_token_documents(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<std::vector<std::string>> docs;
  for (std::string_view line : split_lines(text)) {
    std::vector<std::string> doc;
    for (std::string_view tok : split_ws(line)) doc.emplace_back(tok);
    if (!doc.empty()) docs.push_back(std::move(doc));
  }
  return docs;
}

std::string format_bow(const Corpus& corpus) {
  std::string out = std::to_string(corpus.vocab_size()) + " " +
                    std::to_string(corpus.num_docs()) + "\n";
  for (const auto& row : corpus.docs) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(row[i].word) + ":" + std::to_string(row[i].value);
    }
    out += '\n';
  }
  return out;
}

std::string format_vocab(const std::vector<std::string>& vocab) {
  std::string out;
  for (const auto& w : vocab) out += w + "\n";
  return out;
}

TfidfMatrix compute_tfidf(const Corpus& corpus) {
  const std::size_t v = corpus.vocab_size();
  const double n_docs = static_cast<double>(corpus.num_docs());
  std::vector<std::uint32_t> df(v, 0);
  for (const auto& row : corpus.docs)
    for (const auto& e : row) ++df[e.word];

  std::vector<double> idf(v);
  for (std::size_t w = 0; w < v; ++w)
    idf[w] = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[w]))) + 1.0;

  TfidfMatrix m;
  m.vocab_size = v;
  m.rows.reserve(corpus.num_docs());
  for (const auto& row : corpus.docs) {
    WeightRow out;
    out.reserve(row.size());
    double mx = 0.0;
    for (const auto& e : row) {
      const double w = static_cast<double>(e.value) * idf[e.word];
      out.push_back({e.word, w});
      mx = std::max(mx, w);
    }
    for (auto& e : out) e.value /= mx;
    m.rows.push_back(std::move(out));
  }
  return m;
}

}  // namespace gtm
