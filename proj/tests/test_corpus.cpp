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
#include <fstream>

#include "gtm/corpus.hpp"
#include "gtm/errors.hpp"
#include "support.hpp"

using namespace gtm;

namespace {

// Brute-force dense TF-IDF straight from the definition.
std::vector<std::vector<double>> tfidf_oracle(const std::vector<std::vector<double>>& counts) {
  const std::size_t d = counts.size();
  const std::size_t v = counts[0].size();
  std::vector<double> idf(v);
  for (std::size_t w = 0; w < v; ++w) {
    double df = 0;
    for (std::size_t i = 0; i < d; ++i) df += counts[i][w] > 0 ? 1 : 0;
    idf[w] = std::log((1.0 + d) / (1.0 + df)) + 1.0;
  }
  std::vector<std::vector<double>> out(d, std::vector<double>(v, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    double mx = 0;
    for (std::size_t w = 0; w < v; ++w) mx = std::max(mx, counts[i][w] * idf[w]);
    for (std::size_t w = 0; w < v; ++w) out[i][w] = counts[i][w] * idf[w] / mx;
  }
  return out;
}

std::vector<std::vector<double>> densify(const TfidfMatrix& m) {
  std::vector<std::vector<double>> out(m.num_docs(), std::vector<double>(m.vocab_size, 0.0));
  for (std::size_t i = 0; i < m.num_docs(); ++i)
    for (const auto& e : m.rows[i]) out[i][e.word] = e.value;
  return out;
}

}  // namespace

TEST_CASE("parse bow") {
  const Corpus c = parse_bow("3 2\n0:2 1:1\n1:1 2:3\n", {"a", "b", "c"});
  CHECK(c.vocab_size() == 3);
  CHECK(c.num_docs() == 2);
  CHECK(c.docs[0] == CountRow{{0, 2}, {1, 1}});
  CHECK(c.docs[1] == CountRow{{1, 1}, {2, 3}});
  CHECK(c.num_tokens() == 7);
}

TEST_CASE("parse tokens") {
  const Corpus c = parse_tokens("a b a\nb c c c\n");
  CHECK(c.vocab == std::vector<std::string>{"a", "b", "c"});
  CHECK(c.docs[0] == CountRow{{0, 2}, {1, 1}});
  CHECK(c.docs[1] == CountRow{{1, 1}, {2, 3}});
}

TEST_CASE("bow parse errors carry the line") {
  try {
    parse_bow("0: 2\n", {"a", "b"});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  auto line_of = [](const std::string& text) {
    try {
      parse_bow(text, {"a", "b", "c"});
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("3 2\n0:2\n1: 1\n") == 3);
  CHECK(line_of("3 2\n0:2\n5:1\n") == 3);   // word index out of range
  CHECK(line_of("3 2\n0:0\n1:1\n") == 2);   // zero count
  CHECK(line_of("3 2\n0:1 0:2\n1:1\n") == 2);  // duplicate word
  CHECK(line_of("3 2\n0:1\n") != 0);        // too few documents
  CHECK_THROWS_AS(parse_bow("4 1\n0:1\n", {"a", "b", "c"}), CorpusError);
}

TEST_CASE("corpus validation") {
  Corpus c;
  c.vocab = {"a"};
  c.docs = {{{0, 1}}, {{0, 1}}};
  CHECK_THROWS_AS(c.validate(), CorpusError);
  CHECK_THROWS_AS(parse_tokens("a b\n"), CorpusError);  // one document
}

TEST_CASE("format round trip") {
  const Corpus c = parse_tokens("x y x\ny z z z\nq x\n");
  CHECK(parse_bow(format_bow(c), c.vocab) == c);
  test::TempDir dir;
  std::ofstream(dir / "c.bow") << format_bow(c);
  std::ofstream(dir / "c.bow.vocab") << format_vocab(c.vocab);
  CHECK(load_corpus(dir / "c.bow", CorpusFormat::kBow) == c);
  CHECK(parse_format("tokens") == CorpusFormat::kTokens);
  CHECK_THROWS_AS(parse_format("csv"), ArgumentError);
}

TEST_CASE("tfidf single document reduces to count ratio") {
  Corpus c;
  c.vocab = {"a", "b"};
  c.docs = {{{0, 2}, {1, 1}}};
  const TfidfMatrix m = compute_tfidf(c);
  CHECK(m.rows[0][0].value == 1.0);
  CHECK(m.rows[0][1].value == 0.5);
}

TEST_CASE("tfidf idf monotone in document frequency") {
  // 'a' in every document with the same count as the rare word 'b'.
  const Corpus c = parse_tokens("a b\na c\na c\n");
  const TfidfMatrix m = compute_tfidf(c);
  CHECK(m.rows[0][1].value == 1.0);
  CHECK(m.rows[0][0].value < 1.0);
}

TEST_CASE("tfidf matches brute-force oracle") {
  const Corpus c = parse_bow("3 2\n0:2 1:1\n1:1 2:3\n", {"a", "b", "c"});
  const auto expected = tfidf_oracle({{2, 1, 0}, {0, 1, 3}});
  const auto got = densify(compute_tfidf(c));
  for (std::size_t i = 0; i < 2; ++i) {
    double mx = 0;
    for (std::size_t w = 0; w < 3; ++w) {
      CHECK(got[i][w] == doctest::Approx(expected[i][w]).epsilon(1e-15));
      mx = std::max(mx, got[i][w]);
    }
    CHECK(mx == 1.0);
  }

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> cnt(0, 4);
  std::vector<std::vector<double>> counts(12, std::vector<double>(9));
  Corpus r;
  for (std::size_t w = 0; w < 9; ++w) r.vocab.push_back("w" + std::to_string(w));
  for (auto& row : counts) {
    CountRow cr;
    row[0] = 1;
    for (std::size_t w = 0; w < 9; ++w) {
      if (w) row[w] = cnt(rng);
      if (row[w] > 0) cr.push_back({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(row[w])});
    }
    r.docs.push_back(cr);
  }
  const auto ro = tfidf_oracle(counts);
  const auto rg = densify(compute_tfidf(r));
  for (std::size_t i = 0; i < counts.size(); ++i)
    for (std::size_t w = 0; w < 9; ++w) CHECK(rg[i][w] == doctest::Approx(ro[i][w]).epsilon(1e-14));
}

TEST_CASE("file loaders") {
  test::TempDir dir;
  std::ofstream(dir / "v.txt") << "alpha\nbeta\r\ngamma\n";
  CHECK(load_vocab(dir / "v.txt") == std::vector<std::string>{"alpha", "beta", "gamma"});
  std::ofstream(dir / "t.txt") << "x y  z\n\n  y x\n";
  const auto docs = load_token_documents(dir / "t.txt");
  REQUIRE(docs.size() == 2);
  CHECK(docs[0] == std::vector<std::string>{"x", "y", "z"});
  CHECK(docs[1] == std::vector<std::string>{"y", "x"});
  CHECK_THROWS_AS(load_vocab(dir / "missing.txt"), Error);
}
