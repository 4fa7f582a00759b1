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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "gtm/corpus.hpp"
#include "gtm/errors.hpp"
#include "gtm/evaluation.hpp"
#include "gtm/model.hpp"
#include "gtm/synthetic.hpp"
#include "manifest.hpp"

namespace gtm::cli {

namespace {

// Usage-level failure detected before any work starts.
struct UsageFailure {
  std::string message;
};

void require_readable(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path))
    throw UsageFailure{std::string(what) + " not found: '" + path.string() + "'"};
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) throw UsageFailure{"--out-dir is required"};
  fs::create_directories(dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CorpusFormat format_or_usage(const std::string& name) {
  try {
    return parse_format(name);
  } catch (const Error& e) {
    throw UsageFailure{e.what()};
  }
}

// Maps exceptions to exit codes. Parse errors are reported against `input`.
template <typename Fn>
int guarded(std::ostream& err, const fs::path& input, Fn&& fn) {
  try {
    return fn();
  } catch (const UsageFailure& e) {
    err << "error: " << e.message << "\n";
    return kUsageError;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
    return kUsageError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    err << "error: " << input.string() << ": " << e.what() << "\n";
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

std::vector<std::string> vocab_for_checkpoint(const fs::path& checkpoint, const fs::path& vocab,
                                              std::size_t expected) {
  const fs::path path = vocab.empty() ? checkpoint.parent_path() / kVocabFile : vocab;
  require_readable(path, "vocabulary");
  std::vector<std::string> words = load_vocab(path);
  if (words.size() != expected)
    throw UsageFailure{"vocabulary size mismatch: checkpoint has V=" + std::to_string(expected) +
                       ", '" + path.string() + "' has " + std::to_string(words.size()) +
                       " words"};
  return words;
}

struct TrainRun {
  fs::path corpus;
  std::string format;
  fs::path vocab;
  TrainConfig config;
  fs::path out_dir;
  std::size_t checkpoint_every;
};

int run_training(const TrainRun& run, std::ostream& out) {
  format_or_usage(run.format);
  require_readable(run.corpus, "corpus");
  run.config.validate();
  ensure_dir(run.out_dir);

  const Corpus corpus = load_corpus(run.corpus, parse_format(run.format), run.vocab);
  if (run.config.topics >= corpus.vocab_size())
    throw UsageFailure{"--topics must be smaller than the vocabulary size (" +
                       std::to_string(corpus.vocab_size()) + ")"};

  nlohmann::json manifest;
  manifest["corpus"] = {{"path", fs::absolute(run.corpus).string()},
                        {"format", run.format},
                        {"vocab", run.vocab.empty() ? "" : fs::absolute(run.vocab).string()},
                        {"sha256", sha256_file(run.corpus)},
                        {"vocab_size", corpus.vocab_size()},
                        {"num_docs", corpus.num_docs()},
                        {"num_tokens", corpus.num_tokens()}};
  manifest["config"] = config_to_json(run.config);
  manifest["seed"] = run.config.seed;
  manifest["checkpoint_every"] = run.checkpoint_every;
  manifest["started_at"] = utc_timestamp();

  write_text(run.out_dir / kVocabFile, format_vocab(corpus.vocab));
  std::ofstream log(run.out_dir / kLossLog, std::ios::trunc);
  if (!log) throw Error("cannot write loss log in '" + run.out_dir.string() + "'");
  log << "epoch\tbatch\trec\tmmd\ttotal\n";

  nlohmann::json artifacts = nlohmann::json::array({kVocabFile, kLossLog});
  BatchRecord last{};
  TrainCallbacks callbacks;
  callbacks.on_batch = [&](const BatchRecord& r) {
    last = r;
    log << r.epoch << '\t' << r.batch << '\t' << fmt_double(r.loss.rec) << '\t'
        << fmt_double(r.loss.mmd) << '\t' << fmt_double(r.loss.total) << '\n';
  };
  callbacks.on_epoch_end = [&](std::size_t epoch, const ModelParams& params) {
    log.flush();
    if (run.checkpoint_every && epoch % run.checkpoint_every == 0) {
      const std::string name = epoch_checkpoint_name(epoch);
      save_checkpoint(run.out_dir / name, params, run.config.seed);
      artifacts.push_back(name);
    }
  };

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    TrainResult result = train(corpus, run.config, callbacks);
    save_checkpoint(run.out_dir / kFinalCheckpoint, result.params, run.config.seed);
    artifacts.push_back(kFinalCheckpoint);
  } catch (const NumericError& e) {
    log.flush();
    manifest["status"] = "failed";
    manifest["failure"] = {{"epoch", last.epoch}, {"batch", last.batch}, {"message", e.what()}};
    manifest["artifacts"] = artifacts;
    manifest["seconds"] = elapsed();
    write_json_atomic(run.out_dir / kManifestFile, manifest);
    throw;
  }
  log.close();

  manifest["status"] = "ok";
  manifest["artifacts"] = artifacts;
  manifest["seconds"] = elapsed();
  manifest["final_loss"] = {{"rec", last.loss.rec}, {"mmd", last.loss.mmd}, {"total", last.loss.total}};
  write_json_atomic(run.out_dir / kManifestFile, manifest);

  out << "trained K=" << run.config.topics << " on D=" << corpus.num_docs()
      << " V=" << corpus.vocab_size() << " for " << run.config.epochs << " epochs; final total "
      << fmt_double(last.loss.total) << "\n";
  out << "artifacts in " << run.out_dir.string() << "\n";
  return kOk;
}

}  // namespace

std::string epoch_checkpoint_name(std::size_t epoch) { return "ckpt_epoch" + std::to_string(epoch); }

int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, args.input, [&] {
    const CorpusFormat format = format_or_usage(args.format);
    require_readable(args.input, "input");
    ensure_dir(args.out_dir);
    const Corpus corpus = load_corpus(args.input, format, args.vocab);
    const fs::path bow = args.out_dir / kIngestedCorpus;
    write_text(bow, format_bow(corpus));
    write_text(bow.string() + ".vocab", format_vocab(corpus.vocab));
    out << "V=" << corpus.vocab_size() << " D=" << corpus.num_docs()
        << " tokens=" << corpus.num_tokens() << "\n";
    return kOk;
  });
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, args.corpus, [&] {
    return run_training({args.corpus, args.format, args.vocab, args.config, args.out_dir,
                         args.checkpoint_every},
                        out);
  });
}

int cmd_rerun(const fs::path& manifest_path, const fs::path& out_dir, std::ostream& out,
              std::ostream& err) {
  return guarded(err, manifest_path, [&] {
    require_readable(manifest_path, "manifest");
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
      throw Error("unreadable manifest '" + manifest_path.string() + "': " + e.what());
    }
    const auto& c = m.at("corpus");
    const fs::path corpus = c.at("path").get<std::string>();
    require_readable(corpus, "corpus");
    if (sha256_file(corpus) != c.at("sha256").get<std::string>())
      throw Error("corpus '" + corpus.string() + "' changed since the manifest was written");
    return run_training({corpus, c.at("format").get<std::string>(),
                         c.at("vocab").get<std::string>(), config_from_json(m.at("config")),
                         out_dir, m.at("checkpoint_every").get<std::size_t>()},
                        out);
  });
}

int cmd_topics(const TopicsArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, args.checkpoint, [&] {
    require_readable(args.checkpoint, "checkpoint");
    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const auto vocab = vocab_for_checkpoint(args.checkpoint, args.vocab, ckpt.params.config.n_words);
    if (args.top_n < 1 || args.top_n > vocab.size())
      throw UsageFailure{"--top-n must be in [1, " + std::to_string(vocab.size()) + "]"};
    const auto top = top_word_ids(topic_word_matrix(ckpt.params), args.top_n);
    for (std::size_t k = 0; k < top.size(); ++k) {
      out << k << '\t';
      for (std::size_t i = 0; i < top[k].size(); ++i) out << (i ? " " : "") << vocab[top[k][i]];
      out << '\n';
    }
    return kOk;
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, args.reference, [&] {
    const CorpusFormat format = format_or_usage(args.reference_format);
    require_readable(args.checkpoint, "checkpoint");
    require_readable(args.reference, "reference corpus");
    if (args.window < 2) throw UsageFailure{"--window must be at least 2"};
    const Checkpoint ckpt = load_checkpoint(args.checkpoint);
    const auto vocab = vocab_for_checkpoint(args.checkpoint, args.vocab, ckpt.params.config.n_words);

    CooccurrenceIndex index;
    if (format == CorpusFormat::kTokens) {
      index = build_cooccurrence(load_token_documents(args.reference), args.window);
    } else {
      // Bag-of-words has no token order: each document is one window.
      index = build_cooccurrence(documents_from_corpus(load_corpus(args.reference, format)),
                                 kWholeDocument);
    }
    const TopicReport report =
        score_topics(topic_word_matrix(ckpt.params), vocab, index, args.top_n);
    out << format_report(report);
    return kOk;
  });
}

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, args.out_dir, [&] {
    ensure_dir(args.out_dir);
    SyntheticOptions opts;
    opts.topics = args.topics;
    opts.words_per_topic = args.words_per_topic;
    opts.docs = args.docs;
    opts.doc_length = args.doc_length;
    opts.alpha = args.alpha;
    opts.seed = args.seed;
    const SyntheticCorpus synth = generate_synthetic(opts);

    std::ostringstream tokens;
    for (const auto& doc : synth.tokens) {
      for (std::size_t i = 0; i < doc.size(); ++i) tokens << (i ? " " : "") << doc[i];
      tokens << '\n';
    }
    write_text(args.out_dir / "synth.tokens", tokens.str());
    write_text(args.out_dir / "synth.bow", format_bow(synth.corpus));
    write_text(args.out_dir / "synth.bow.vocab", format_vocab(synth.corpus.vocab));
    std::ostringstream truth;
    for (std::size_t k = 0; k < synth.true_topics.size(); ++k) {
      truth << k << '\t';
      for (std::size_t i = 0; i < synth.true_topics[k].size(); ++i)
        truth << (i ? " " : "") << synth.corpus.vocab[synth.true_topics[k][i]];
      truth << '\n';
    }
    write_text(args.out_dir / "true_topics.txt", truth.str());
    out << "V=" << synth.corpus.vocab_size() << " D=" << synth.corpus.num_docs()
        << " tokens=" << synth.corpus.num_tokens() << "\n";
    return kOk;
  });
}

}  // namespace gtm::cli
