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

#include "gtm/model.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gtm/errors.hpp"

namespace gtm {

void ModelConfig::validate() const {
  if (topics < 2) throw ConfigError("topic count K must be >= 2, got " + std::to_string(topics));
  if (enc_hidden < 1 || dec_hidden < 1) throw ConfigError("layer widths must be >= 1");
  if (n_docs < 1 || n_words < 1) throw ConfigError("graph must have documents and words");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
    throw ConfigError("leaky_slope must lie in (0, 1)");
}

BatchNormLayer BatchNormLayer::make(std::size_t width) {
  return {Tensor(1, width, 1.0), Tensor(1, width, 0.0),
          BatchNormState{Tensor(1, width, 0.0), Tensor(1, width, 1.0)}};
}

std::vector<Tensor*> ModelParams::trainable() {
  return {&enc_w0, &enc_bn0.gamma, &enc_bn0.beta, &enc_w1, &enc_bn1.gamma, &enc_bn1.beta,
          &dec_w0, &dec_b0,        &dec_bn0.gamma, &dec_bn0.beta, &dec_w1, &dec_b1};
}

std::vector<const Tensor*> ModelParams::trainable() const {
  auto mut = const_cast<ModelParams*>(this)->trainable();
  return {mut.begin(), mut.end()};
}

const std::vector<std::string>& ModelParams::trainable_names() {
  static const std::vector<std::string> names = {
      "enc_w0", "enc_bn0.gamma", "enc_bn0.beta", "enc_w1", "enc_bn1.gamma", "enc_bn1.beta",
      "dec_w0", "dec_b0",        "dec_bn0.gamma", "dec_bn0.beta", "dec_w1", "dec_b1"};
  return names;
}

bool ModelParams::all_finite() const {
  for (const Tensor* t : trainable())
    if (!t->all_finite()) return false;
  for (const BatchNormLayer* bn : {&enc_bn0, &enc_bn1, &dec_bn0})
    if (!bn->state.running_mean.all_finite() || !bn->state.running_var.all_finite())
      return false;
  return true;
}

namespace {

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor t(fan_in, fan_out);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

void check_batch(const ModelParams& params, const SubgraphBatch& batch) {
  const ModelConfig& c = params.config;
  if (batch.num_nodes() != batch.num_docs() + c.n_words) {
    throw ConfigError("batch has " + std::to_string(batch.num_nodes() - batch.num_docs()) +
                      " word nodes but the model was sized for V=" + std::to_string(c.n_words));
  }
  for (std::size_t g : batch.global_nodes)
    if (g >= c.num_nodes())
      throw ConfigError("batch node " + std::to_string(g) + " outside the model's N=" +
                        std::to_string(c.num_nodes()));
}

}  // namespace

ModelParams init_params(const ModelConfig& config, std::uint64_t rng_seed) {
  config.validate();
  std::mt19937_64 rng(rng_seed);
  ModelParams p;
  p.config = config;
  p.enc_w0 = xavier_uniform(config.num_nodes(), config.enc_hidden, rng);
  p.enc_bn0 = BatchNormLayer::make(config.enc_hidden);
  p.enc_w1 = xavier_uniform(config.enc_hidden, config.topics, rng);
  p.enc_bn1 = BatchNormLayer::make(config.topics);
  p.dec_w0 = xavier_uniform(config.topics, config.dec_hidden, rng);
  p.dec_b0 = Tensor(1, config.dec_hidden);
  p.dec_bn0 = BatchNormLayer::make(config.dec_hidden);
  p.dec_w1 = xavier_uniform(config.dec_hidden, config.n_words, rng);
  p.dec_b1 = Tensor(1, config.n_words);
  return p;
}

ParamVars register_params(Tape& tape, const ModelParams& params, bool requires_grad) {
  ParamVars pv;
  pv.vars.reserve(ModelParams::kNumTrainable);
  for (const Tensor* t : params.trainable()) pv.vars.push_back(tape.leaf(*t, requires_grad));
  return pv;
}

Var encode(const ParamVars& vars, ModelParams& params, const SubgraphBatch& batch, Mode mode) {
  check_batch(params, batch);
  const double slope = params.config.leaky_slope;
  const SparseMatrix& adj = batch.adj_norm_sub;

  // Layer 1: A~ * (I_sub * W0) is a row gather of the embedding table.
  Var h = ops::gather_rows(vars.enc_w0(), batch.global_nodes);
  h = ops::spmm(adj, h);
  h = ops::leaky_relu(h, slope);
  h = ops::batch_norm(h, vars.enc_bn0_gamma(), vars.enc_bn0_beta(), params.enc_bn0.state, mode);

  // Layer 2: A~ * H * W1
  h = ops::spmm(adj, ops::matmul(h, vars.enc_w1()));
  h = ops::leaky_relu(h, slope);
  h = ops::batch_norm(h, vars.enc_bn1_gamma(), vars.enc_bn1_beta(), params.enc_bn1.state, mode);

  std::vector<std::size_t> doc_rows(batch.num_docs());
  std::iota(doc_rows.begin(), doc_rows.end(), 0);
  return ops::softmax_rows(ops::gather_rows(h, std::move(doc_rows)));
}

Var decode(const ParamVars& vars, ModelParams& params, Var z, Mode mode) {
  if (z.value().cols() != params.config.topics) {
    throw ConfigError("decoder expects " + std::to_string(params.config.topics) +
                      " topic columns, got " + std::to_string(z.value().cols()));
  }
  const double slope = params.config.leaky_slope;
  Var h = ops::add_row(ops::matmul(z, vars.dec_w0()), vars.dec_b0());
  h = ops::leaky_relu(h, slope);
  h = ops::batch_norm(h, vars.dec_bn0_gamma(), vars.dec_bn0_beta(), params.dec_bn0.state, mode);
  Var logits = ops::add_row(ops::matmul(h, vars.dec_w1()), vars.dec_b1());
  return ops::softmax_rows(logits);
}

Tensor encode(ModelParams& params, const SubgraphBatch& batch, Mode mode) {
  Tape tape;
  ParamVars vars = register_params(tape, params, false);
  return encode(vars, params, batch, mode).value();
}

Tensor decode(ModelParams& params, const Tensor& z, Mode mode) {
  Tape tape;
  ParamVars vars = register_params(tape, params, false);
  return decode(vars, params, tape.constant(z), mode).value();
}

Tensor topic_word_matrix(const ModelParams& params) {
  // Eval mode never writes the running statistics; the const_cast only
  // satisfies the shared signature.
  return decode(const_cast<ModelParams&>(params), Tensor::identity(params.config.topics),
                Mode::kEval);
}

}  // namespace gtm
