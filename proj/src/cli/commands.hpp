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
#include <iosfwd>
#include <string>

#include "gtm/trainer.hpp"

namespace gtm::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

struct IngestArgs {
  fs::path input;
  std::string format = "tokens";
  fs::path vocab;  // bow input only; default <input>.vocab
  fs::path out_dir;  // receives corpus.bow and corpus.bow.vocab
};

struct TrainArgs {
  fs::path corpus;
  std::string format = "bow";
  fs::path vocab;
  TrainConfig config;
  fs::path out_dir;
  std::size_t checkpoint_every = 10;  // 0 disables per-epoch checkpoints
};

struct TopicsArgs {
  fs::path checkpoint;
  fs::path vocab;
  std::size_t top_n = 10;
};

struct EvalArgs {
  fs::path checkpoint;
  fs::path reference;
  std::string reference_format = "tokens";
  fs::path vocab;  // default: vocab.txt next to the checkpoint
  std::size_t window = 10;
  std::size_t top_n = 10;
};

struct SynthArgs {
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::size_t topics = 5;
  std::size_t words_per_topic = 40;
  std::size_t docs = 1000;
  std::size_t doc_length = 80;
  double alpha = 0.1;
};

// Artifact names inside a training output directory.
inline constexpr const char* kLossLog = "loss_log.tsv";
inline constexpr const char* kFinalCheckpoint = "final";
inline constexpr const char* kVocabFile = "vocab.txt";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kIngestedCorpus = "corpus.bow";
std::string epoch_checkpoint_name(std::size_t epoch);

// Each command writes results to `out`, diagnostics to `err`, and returns
// an ExitCode.
int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err);
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
int cmd_topics(const TopicsArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);
// Re-runs a training run from its manifest into `out_dir`.
int cmd_rerun(const fs::path& manifest, const fs::path& out_dir, std::ostream& out,
              std::ostream& err);

}  // namespace gtm::cli
