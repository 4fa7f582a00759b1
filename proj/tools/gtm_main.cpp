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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_train_flags(CLI::App* cmd, gtm::TrainConfig& c, std::size_t& checkpoint_every) {
  cmd->add_option("--topics", c.topics, "Number of topics K")->required();
  cmd->add_option("--epochs", c.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--batch-size", c.batch_size, "Documents per subgraph batch")
      ->capture_default_str();
  cmd->add_option("--lr", c.learning_rate, "RMSProp learning rate")->capture_default_str();
  cmd->add_option("--lambda-mmd", c.lambda_mmd,
                  "Weight of the MMD term (design default, not a published value)")
      ->capture_default_str();
  cmd->add_option("--alpha", c.dirichlet_alpha,
                  "Symmetric Dirichlet prior concentration (design default)")
      ->capture_default_str();
  cmd->add_option("--enc-hidden", c.enc_hidden, "First graph convolution width (design default)")
      ->capture_default_str();
  cmd->add_option("--dec-hidden", c.dec_hidden, "Decoder hidden width (design default)")
      ->capture_default_str();
  cmd->add_option("--leaky-slope", c.leaky_slope, "LeakyReLU negative slope (design default)")
      ->capture_default_str();
  cmd->add_option("--rmsprop-decay", c.rmsprop_decay, "RMSProp decay (design default)")
      ->capture_default_str();
  cmd->add_option("--rmsprop-eps", c.rmsprop_eps, "RMSProp epsilon (design default)")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--checkpoint-every", checkpoint_every,
                  "Write ckpt_epoch<N> every N epochs; 0 disables (design default)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gtm::cli;
  CLI::App app{"Graph topic model: ingest, train, inspect and score topic models"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Convert a corpus to canonical bag-of-words");
  c_ingest->add_option("input", ingest.input, "Input corpus")->required();
  c_ingest->add_option("--format", ingest.format, "Input format: tokens or bow")
      ->capture_default_str();
  c_ingest->add_option("--vocab", ingest.vocab, "Vocabulary sidecar for bow input");
  c_ingest->add_option("--out-dir", ingest.out_dir, "Output directory")->required();

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train a model and write checkpoints");
  c_train->add_option("corpus", train.corpus, "Training corpus")->required();
  c_train->add_option("--format", train.format, "Corpus format: bow or tokens")
      ->capture_default_str();
  c_train->add_option("--vocab", train.vocab, "Vocabulary sidecar for bow input");
  c_train->add_option("--out-dir", train.out_dir, "Run directory")->required();
  add_train_flags(c_train, train.config, train.checkpoint_every);

  std::string rerun_manifest;
  std::string rerun_out;
  auto* c_rerun = app.add_subcommand("rerun", "Repeat a training run from its manifest");
  c_rerun->add_option("manifest", rerun_manifest, "manifest.json of the original run")
      ->required();
  c_rerun->add_option("--out-dir", rerun_out, "Run directory")->required();

  TopicsArgs topics;
  auto* c_topics = app.add_subcommand("topics", "Print the top words of every topic");
  c_topics->add_option("checkpoint", topics.checkpoint, "Checkpoint file")->required();
  c_topics->add_option("--vocab", topics.vocab, "Vocabulary (default: vocab.txt beside checkpoint)");
  c_topics->add_option("--top-n", topics.top_n, "Words per topic")->capture_default_str();

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Score topics by NPMI on a reference corpus");
  c_eval->add_option("checkpoint", eval.checkpoint, "Checkpoint file")->required();
  c_eval->add_option("reference", eval.reference, "Reference corpus")->required();
  c_eval->add_option("--format", eval.reference_format, "Reference format: tokens or bow")
      ->capture_default_str();
  c_eval->add_option("--vocab", eval.vocab, "Vocabulary (default: vocab.txt beside checkpoint)");
  c_eval->add_option("--window", eval.window, "Sliding window size")->capture_default_str();
  c_eval->add_option("--top-n", eval.top_n, "Words per topic")->capture_default_str();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a planted-topic corpus");
  c_synth->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  c_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  c_synth->add_option("--topics", synth.topics, "Planted topics")->capture_default_str();
  c_synth->add_option("--words-per-topic", synth.words_per_topic)->capture_default_str();
  c_synth->add_option("--docs", synth.docs)->capture_default_str();
  c_synth->add_option("--doc-length", synth.doc_length)->capture_default_str();
  c_synth->add_option("--alpha", synth.alpha, "Document mixture concentration")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }

  if (*c_ingest) return cmd_ingest(ingest, std::cout, std::cerr);
  if (*c_train) return cmd_train(train, std::cout, std::cerr);
  if (*c_rerun) return cmd_rerun(rerun_manifest, rerun_out, std::cout, std::cerr);
  if (*c_topics) return cmd_topics(topics, std::cout, std::cerr);
  if (*c_eval) return cmd_eval(eval, std::cout, std::cerr);
  return cmd_synth(synth, std::cout, std::cerr);
}
