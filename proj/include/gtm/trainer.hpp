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
#include <functional>
#include <vector>

#include "gtm/corpus.hpp"
#include "gtm/model.hpp"
#include "gtm/objectives.hpp"

namespace gtm {

struct TrainConfig {
  std::size_t topics = 0;
  std::size_t epochs = 100;
  std::size_t batch_size = 1000;
  double learning_rate = 0.01;
  double lambda_mmd = 1.0;
  double dirichlet_alpha = 0.1;
  std::size_t enc_hidden = 100;
  std::size_t dec_hidden = 100;
  double leaky_slope = 0.01;
  double rmsprop_decay = 0.9;
  double rmsprop_eps = 1e-8;
  std::uint64_t seed = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Per-parameter squared-gradient accumulators, ModelParams::trainable() order.
struct OptimizerState {
  std::vector<Tensor> accum;

  static OptimizerState zeros_like(const ModelParams& params);
};

// s <- rho * s + (1 - rho) * g^2;  theta <- theta - lr * g / (sqrt(s) + eps).
// Rejects the whole step with NumericError (naming the parameter) when any
// gradient entry is non-finite; nothing is modified in that case.
void rmsprop_step(std::vector<Tensor*> params, const std::vector<Tensor>& grads,
                  OptimizerState& state, double lr, double rho, double eps);
void rmsprop_step(ModelParams& params, const std::vector<Tensor>& grads,
                  OptimizerState& state, double lr, double rho, double eps);

struct BatchRecord {
  std::size_t epoch = 0;  // 1-based
  std::size_t batch = 0;  // 1-based within the epoch
  std::size_t batch_docs = 0;
  LossBreakdown loss;
};

struct TrainCallbacks {
  std::function<void(const BatchRecord&)> on_batch;
  // Called after the last step of each epoch with the current parameters.
  std::function<void(std::size_t epoch, const ModelParams&)> on_epoch_end;
};

struct TrainResult {
  ModelParams params;
  std::vector<BatchRecord> history;
};

// Result of one optimization step on a batch.
struct StepOutput {
  LossBreakdown loss;
  std::vector<Tensor> grads;
};

// Forward + backward of rec + lambda * mmd on one subgraph batch, with the
// prior samples supplied by the caller. Train-mode batch norm.
StepOutput loss_and_gradients(ModelParams& params, const SubgraphBatch& batch,
                              const TfidfMatrix& tfidf, const Tensor& prior_samples,
                              double lambda);

// Dense TF-IDF rows for the given documents (reconstruction targets).
Tensor dense_rows(const TfidfMatrix& tfidf, const std::vector<std::size_t>& doc_ids);

// Documents of every epoch as trained: epoch_batches() with a trailing
// single-document batch folded into its predecessor.
std::vector<std::vector<std::size_t>> training_batches(std::size_t n_docs,
                                                       std::size_t batch_size,
                                                       std::uint64_t seed, std::size_t epoch);

// Full training run. Deterministic given (corpus, config). Throws
// NumericError with epoch/batch on a non-finite loss.
TrainResult train(const Corpus& corpus, const TrainConfig& config,
                  const TrainCallbacks& callbacks = {});

}  // namespace gtm
