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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "gtm/evaluation.hpp"
#include "gtm/graph.hpp"
#include "gtm/kernels.hpp"
#include "gtm/synthetic.hpp"
#include "support.hpp"

namespace {

using namespace gtm;

struct Inputs {
  Tensor a, b, logits, prior, post;
  CorpusGraph graph;
  Tensor features;
  TokenDocs tokens;

  Inputs() {
    std::mt19937_64 rng(1);
    a = test::random_tensor(1000, 100, rng);
    b = test::random_tensor(100, 200, rng);
    logits = test::random_tensor(1000, 200, rng);
    prior = test::random_simplex(1000, 20, rng);
    post = test::random_simplex(1000, 20, rng);
    SyntheticOptions opts;
    opts.docs = 2000;
    const SyntheticCorpus s = generate_synthetic(opts);
    graph = build_graph(compute_tfidf(s.corpus));
    features = test::random_tensor(graph.num_nodes(), 100, rng);
    tokens = s.tokens;
  }
};

const Inputs& inputs() {
  static const Inputs in;
  return in;
}

template <Tensor (*Fn)(const Tensor&, const Tensor&)>
void BM_Matmul(benchmark::State& state) {
  const Inputs& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.a, in.b));
}

template <Tensor (*Fn)(const SparseMatrix&, const Tensor&)>
void BM_Spmm(benchmark::State& state) {
  const Inputs& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.graph.adj_norm, in.features));
}

template <Tensor (*Fn)(const Tensor&)>
void BM_Softmax(benchmark::State& state) {
  const Inputs& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.logits));
}

template <kernels::MmdResult (*Fn)(const Tensor&, const Tensor&, bool)>
void BM_Mmd(benchmark::State& state) {
  const Inputs& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.prior, in.post, true));
}

template <CooccurrenceIndex (*Fn)(const TokenDocs&, std::size_t)>
void BM_Cooccurrence(benchmark::State& state) {
  const Inputs& in = inputs();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(in.tokens, 10));
}

BENCHMARK(BM_Matmul<kernels::serial::matmul>)->Name("matmul/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Matmul<kernels::omp::matmul>)->Name("matmul/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Spmm<kernels::serial::spmm>)->Name("spmm/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Spmm<kernels::omp::spmm>)->Name("spmm/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Softmax<kernels::serial::softmax_rows>)->Name("softmax/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Softmax<kernels::omp::softmax_rows>)->Name("softmax/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mmd<kernels::serial::mmd>)->Name("mmd/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mmd<kernels::omp::mmd>)->Name("mmd/omp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cooccurrence<serial::build_cooccurrence>)->Name("cooccurrence/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cooccurrence<build_cooccurrence>)->Name("cooccurrence/omp")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
