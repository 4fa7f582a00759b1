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

#include "gtm/trainer.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "gtm/errors.hpp"
#include "gtm/graph.hpp"

namespace gtm {

namespace {

enum class Stream : std::uint32_t { kBatches = 1, kPrior = 2 };

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (std::uint64_t{out[0]} << 32) | out[1];
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void TrainConfig::validate() const {
  require(topics >= 2, "topics must be >= 2, got " + std::to_string(topics));
  require(epochs >= 1, "epochs must be >= 1");
  require(batch_size >= 1, "batch_size must be >= 1");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(lambda_mmd > 0.0, "lambda_mmd must be > 0");
  require(dirichlet_alpha > 0.0, "dirichlet_alpha must be > 0");
  require(enc_hidden >= 1 && dec_hidden >= 1, "hidden widths must be >= 1");
  require(leaky_slope > 0.0 && leaky_slope < 1.0, "leaky_slope must lie in (0, 1)");
  require(rmsprop_decay > 0.0 && rmsprop_decay < 1.0, "rmsprop_decay must lie in (0, 1)");
  require(rmsprop_eps > 0.0, "rmsprop_eps must be > 0");
}

OptimizerState OptimizerState::zeros_like(const ModelParams& params) {
  OptimizerState s;
  for (const Tensor* t : params.trainable()) s.accum.emplace_back(t->rows(), t->cols());
  return s;
}

void rmsprop_step(std::vector<Tensor*> params, const std::vector<Tensor>& grads,
                  OptimizerState& state, double lr, double rho, double eps) {
  if (params.size() != grads.size() || params.size() != state.accum.size())
    throw ArgumentError("rmsprop_step: parameter, gradient and state counts differ");
  const auto& names = ModelParams::trainable_names();
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!grads[i].same_shape(*params[i]) || !state.accum[i].same_shape(*params[i]))
      throw ShapeError("rmsprop_step: shape mismatch for parameter " + std::to_string(i));
    if (!grads[i].all_finite()) {
      const std::string name = params.size() == names.size() ? names[i] : std::to_string(i);
      throw NumericError("non-finite gradient for parameter " + name);
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& theta = params[i]->data();
    auto& s = state.accum[i].data();
    const auto& g = grads[i].data();
    for (std::size_t j = 0; j < theta.size(); ++j) {
      s[j] = rho * s[j] + (1.0 - rho) * g[j] * g[j];
      theta[j] -= lr * g[j] / (std::sqrt(s[j]) + eps);
    }
  }
}

void rmsprop_step(ModelParams& params, const std::vector<Tensor>& grads, OptimizerState& state,
                  double lr, double rho, double eps) {
  rmsprop_step(params.trainable(), grads, state, lr, rho, eps);
}

Tensor dense_rows(const TfidfMatrix& tfidf, const std::vector<std::size_t>& doc_ids) {
  Tensor x(doc_ids.size(), tfidf.vocab_size);
  for (std::size_t i = 0; i < doc_ids.size(); ++i)
    for (const auto& e : tfidf.rows[doc_ids[i]]) x(i, e.word) = e.value;
  return x;
}

StepOutput loss_and_gradients(ModelParams& params, const SubgraphBatch& batch,
                              const TfidfMatrix& tfidf, const Tensor& prior_samples,
                              double lambda) {
  Tape tape;
  ParamVars vars = register_params(tape, params);
  Var z_hat = encode(vars, params, batch, Mode::kTrain);
  Var x_hat = decode(vars, params, z_hat, Mode::kTrain);
  Var rec = reconstruction_loss(dense_rows(tfidf, batch.doc_node_ids), x_hat);
  Var div = mmd(prior_samples, z_hat);
  Var total = ops::add(rec, ops::scale(div, lambda));

  StepOutput out;
  out.loss.rec = rec.value()(0, 0);
  out.loss.mmd = div.value()(0, 0);
  out.loss.total = total.value()(0, 0);
  out.loss.lambda = lambda;
  if (!std::isfinite(out.loss.total)) return out;

  tape.backward(total);
  out.grads.reserve(vars.vars.size());
  for (Var v : vars.vars) out.grads.push_back(v.grad());
  return out;
}

std::vector<std::vector<std::size_t>> training_batches(std::size_t n_docs,
                                                       std::size_t batch_size,
                                                       std::uint64_t seed, std::size_t epoch) {
  auto batches = epoch_batches(n_docs, batch_size, derive_seed(seed, Stream::kBatches, epoch));
  // Batch norm and the MMD estimator both need two rows.
  if (batches.size() >= 2 && batches.back().size() == 1) {
    batches[batches.size() - 2].push_back(batches.back().front());
    batches.pop_back();
  }
  return batches;
}

TrainResult train(const Corpus& corpus, const TrainConfig& config,
                  const TrainCallbacks& callbacks) {
  config.validate();
  corpus.validate();
  if (config.topics >= corpus.vocab_size()) {
    throw ConfigError("topics (" + std::to_string(config.topics) +
                      ") must be smaller than the vocabulary (" +
                      std::to_string(corpus.vocab_size()) + ")");
  }

  const TfidfMatrix tfidf = compute_tfidf(corpus);
  const CorpusGraph graph = build_graph(tfidf);

  ModelConfig mc;
  mc.n_docs = corpus.num_docs();
  mc.n_words = corpus.vocab_size();
  mc.topics = config.topics;
  mc.enc_hidden = config.enc_hidden;
  mc.dec_hidden = config.dec_hidden;
  mc.leaky_slope = config.leaky_slope;

  TrainResult result{init_params(mc, config.seed), {}};
  ModelParams& params = result.params;
  OptimizerState opt = OptimizerState::zeros_like(params);
  const DirichletPrior prior = DirichletPrior::symmetric(config.topics, config.dirichlet_alpha);
  std::mt19937_64 prior_rng(derive_seed(config.seed, Stream::kPrior, 0));

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto batches = training_batches(corpus.num_docs(), config.batch_size, config.seed, epoch);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const SubgraphBatch batch = sample_subgraph(graph, tfidf, batches[b]);
      const Tensor prior_samples = sample_dirichlet(prior, batch.num_docs(), prior_rng);
      StepOutput step =
          loss_and_gradients(params, batch, tfidf, prior_samples, config.lambda_mmd);
      if (!std::isfinite(step.loss.total)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(b + 1));
      }
      rmsprop_step(params, step.grads, opt, config.learning_rate, config.rmsprop_decay,
                   config.rmsprop_eps);
      if (!params.all_finite()) {
        throw NumericError("non-finite parameter after epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(b + 1));
      }
      BatchRecord rec{epoch, b + 1, batch.num_docs(), step.loss};
      result.history.push_back(rec);
      if (callbacks.on_batch) callbacks.on_batch(rec);
    }
    if (callbacks.on_epoch_end) callbacks.on_epoch_end(epoch, params);
  }
  return result;
}

}  // namespace gtm
