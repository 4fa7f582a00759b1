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
#include <functional>
#include <string>
#include <vector>

#include "gtm/autodiff.hpp"
#include "gtm/graph.hpp"
#include "gtm/tensor.hpp"

namespace gtm {

struct ModelConfig {
  std::size_t n_docs = 0;
  std::size_t n_words = 0;
  std::size_t topics = 0;
  std::size_t enc_hidden = 100;  // first graph convolution width
  std::size_t dec_hidden = 100;
  double leaky_slope = 0.01;

  std::size_t num_nodes() const noexcept { return n_docs + n_words; }
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct BatchNormLayer {
  Tensor gamma;  // 1 x n
  Tensor beta;   // 1 x n
  BatchNormState state;

  static BatchNormLayer make(std::size_t width);
};

// Everything the optimizer updates, plus batch-norm running statistics.
//
// The encoder input features are one-hot node indicators, so the first
// graph convolution weight enc_w0 (N x enc_hidden) doubles as a learned
// node embedding table and no N x N identity is ever materialized.
struct ModelParams {
  ModelConfig config;
  Tensor enc_w0;  // N x enc_hidden
  BatchNormLayer enc_bn0;
  Tensor enc_w1;  // enc_hidden x K
  BatchNormLayer enc_bn1;
  Tensor dec_w0;  // K x dec_hidden
  Tensor dec_b0;  // 1 x dec_hidden
  BatchNormLayer dec_bn0;
  Tensor dec_w1;  // dec_hidden x V
  Tensor dec_b1;  // 1 x V

  static constexpr std::size_t kNumTrainable = 12;

  // Trainable tensors in a fixed order; gradient sets and optimizer state
  // use the same order.
  std::vector<Tensor*> trainable();
  std::vector<const Tensor*> trainable() const;
  static const std::vector<std::string>& trainable_names();

  bool all_finite() const;
};

ModelParams init_params(const ModelConfig& config, std::uint64_t rng_seed);

// Trainable parameters registered as leaves on a tape, same order as
// ModelParams::trainable().
struct ParamVars {
  std::vector<Var> vars;

  Var enc_w0() const { return vars[0]; }
  Var enc_bn0_gamma() const { return vars[1]; }
  Var enc_bn0_beta() const { return vars[2]; }
  Var enc_w1() const { return vars[3]; }
  Var enc_bn1_gamma() const { return vars[4]; }
  Var enc_bn1_beta() const { return vars[5]; }
  Var dec_w0() const { return vars[6]; }
  Var dec_b0() const { return vars[7]; }
  Var dec_bn0_gamma() const { return vars[8]; }
  Var dec_bn0_beta() const { return vars[9]; }
  Var dec_w1() const { return vars[10]; }
  Var dec_b1() const { return vars[11]; }
};

ParamVars register_params(Tape& tape, const ModelParams& params, bool requires_grad = true);

// Graph encoder on the tape. Returns softmax topic distributions of the
// batch's document nodes (B x K). Train mode updates the encoder
// batch-norm running statistics in `params`.
Var encode(const ParamVars& vars, ModelParams& params, const SubgraphBatch& batch, Mode mode);

// MLP decoder on the tape. Returns word distributions (rows x V).
Var decode(const ParamVars& vars, ModelParams& params, Var z, Mode mode);

// Value-level conveniences.
Tensor encode(ModelParams& params, const SubgraphBatch& batch, Mode mode);
Tensor decode(ModelParams& params, const Tensor& z, Mode mode);

// Decoder applied to the K x K identity in eval mode; row k is the word
// distribution of topic k.
Tensor topic_word_matrix(const ModelParams& params);

// Checkpoints: versioned little-endian binary holding the config, the seed
// and every tensor. Round trip is bit-exact. Writes are atomic.
struct Checkpoint {
  ModelParams params;
  std::uint64_t seed = 0;
};

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     std::uint64_t seed);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gtm
