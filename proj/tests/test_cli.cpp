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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "gtm/corpus.hpp"
#include "gtm/evaluation.hpp"
#include "gtm/model.hpp"
#include "support.hpp"

using namespace gtm;
using namespace gtm::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <typename Fn>
Run capture(Fn&& fn) {
  std::ostringstream out, err;
  const int code = fn(out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string t; std::getline(in, t, sep);) out.push_back(t);
  return out;
}

// Small planted-topic corpus written in tokens form; 40 documents.
std::filesystem::path write_synth(const test::TempDir& dir) {
  SynthArgs s;
  s.out_dir = dir / "synth";
  s.topics = 3;
  s.words_per_topic = 6;
  s.docs = 40;
  s.doc_length = 20;
  s.seed = 8;
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_synth(s, o, e); }).code == kOk);
  return s.out_dir;
}

TrainArgs small_train(const std::filesystem::path& corpus, const std::filesystem::path& out) {
  TrainArgs t;
  t.corpus = corpus;
  t.format = "tokens";
  t.out_dir = out;
  t.config.topics = 3;
  t.config.epochs = 3;
  t.config.batch_size = 16;  // 40 docs -> batches of 16, 16, 8
  t.config.enc_hidden = 6;
  t.config.dec_hidden = 6;
  t.config.seed = 5;
  t.checkpoint_every = 2;
  return t;
}

int run_binary(const std::string& args) {
  const char* exe = std::getenv("GTM_CLI");
  REQUIRE(exe != nullptr);
  const int status = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("ingest tokens to bag-of-words") {
  test::TempDir dir;
  std::ofstream(dir / "in.txt") << "a b a\nb c c c\n";
  IngestArgs a;
  a.input = dir / "in.txt";
  a.out_dir = dir / "out";
  const Run r = capture([&](auto& o, auto& e) { return cmd_ingest(a, o, e); });
  CHECK(r.code == kOk);
  CHECK(r.out == "V=3 D=2 tokens=7\n");
  const std::string bow = read_file(dir / "out" / kIngestedCorpus);
  CHECK(bow.rfind("3 2\n", 0) == 0);
  CHECK(load_vocab(dir / "out" / "corpus.bow.vocab") == std::vector<std::string>{"a", "b", "c"});
  CHECK(load_corpus(dir / "out" / kIngestedCorpus, CorpusFormat::kBow) ==
        load_corpus(dir / "in.txt", CorpusFormat::kTokens));
  CHECK(read_file(dir / "in.txt") == "a b a\nb c c c\n");
}

TEST_CASE("ingest error reporting") {
  test::TempDir dir;
  IngestArgs a;
  a.input = dir / "nope.txt";
  a.out_dir = dir / "out";
  Run r = capture([&](auto& o, auto& e) { return cmd_ingest(a, o, e); });
  CHECK(r.code == kUsageError);
  CHECK(r.err.find((dir / "nope.txt").string()) != std::string::npos);

  std::ofstream(dir / "bad.bow") << "3 1\n0: 2\n";
  std::ofstream(dir / "bad.bow.vocab") << "a\nb\nc\n";
  a.input = dir / "bad.bow";
  a.format = "bow";
  r = capture([&](auto& o, auto& e) { return cmd_ingest(a, o, e); });
  CHECK(r.code == kRuntimeFailure);
  CHECK(r.err.find("bad.bow") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);

  a.format = "xml";
  CHECK(capture([&](auto& o, auto& e) { return cmd_ingest(a, o, e); }).code == kUsageError);
}

TEST_CASE("train writes artifacts and manifest") {
  test::TempDir dir;
  const auto synth = write_synth(dir);
  const TrainArgs t = small_train(synth / "synth.tokens", dir / "run");
  const Run r = capture([&](auto& o, auto& e) { return cmd_train(t, o, e); });
  REQUIRE(r.code == kOk);

  for (const char* f : {kLossLog, kFinalCheckpoint, kVocabFile, kManifestFile, "ckpt_epoch2"})
    CHECK(std::filesystem::exists(dir / "run" / f));
  CHECK_FALSE(std::filesystem::exists(dir / "run" / "ckpt_epoch1"));

  const auto log = lines(read_file(dir / "run" / kLossLog));
  CHECK(log[0] == "epoch\tbatch\trec\tmmd\ttotal");
  CHECK(log.size() == 1 + 3 * 3);  // epochs * ceil(D / B)
  const auto fields = split(log[1], '\t');
  REQUIRE(fields.size() == 5);
  CHECK(fields[0] == "1");
  CHECK(std::stod(fields[4]) == doctest::Approx(std::stod(fields[2]) + std::stod(fields[3])));

  const auto m = nlohmann::json::parse(read_file(dir / "run" / kManifestFile));
  CHECK(m["status"] == "ok");
  CHECK(m["seed"] == 5);
  CHECK(m["config"]["topics"] == 3);
  CHECK(m["config"]["lambda_mmd"] == 1.0);
  CHECK(m["corpus"]["sha256"].get<std::string>().size() == 64);
  CHECK(m["corpus"]["num_docs"] == 40);
  CHECK(m.contains("seconds"));
  CHECK(std::filesystem::exists(dir / "synth" / "synth.tokens"));
}

TEST_CASE("repeated seed gives identical runs and rerun reproduces them") {
  test::TempDir dir;
  const auto synth = write_synth(dir);
  const TrainArgs a = small_train(synth / "synth.tokens", dir / "a");
  const TrainArgs b = small_train(synth / "synth.tokens", dir / "b");
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_train(a, o, e); }).code == kOk);
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_train(b, o, e); }).code == kOk);
  CHECK(read_file(dir / "a" / kFinalCheckpoint) == read_file(dir / "b" / kFinalCheckpoint));
  CHECK(read_file(dir / "a" / kLossLog) == read_file(dir / "b" / kLossLog));

  const Run r = capture([&](auto& o, auto& e) { return cmd_rerun(dir / "a" / kManifestFile, dir / "c", o, e); });
  REQUIRE(r.code == kOk);
  CHECK(read_file(dir / "a" / kFinalCheckpoint) == read_file(dir / "c" / kFinalCheckpoint));
  CHECK(read_file(dir / "a" / "ckpt_epoch2") == read_file(dir / "c" / "ckpt_epoch2"));
  CHECK(read_file(dir / "a" / kLossLog) == read_file(dir / "c" / kLossLog));

  // A changed corpus is refused.
  std::ofstream(synth / "synth.tokens", std::ios::app) << "t0w0 t0w1\n";
  CHECK(capture([&](auto& o, auto& e) { return cmd_rerun(dir / "a" / kManifestFile, dir / "d", o, e); })
            .code == kRuntimeFailure);
}

TEST_CASE("train rejects invalid configuration before training") {
  test::TempDir dir;
  const auto synth = write_synth(dir);
  TrainArgs t = small_train(synth / "synth.tokens", dir / "run");
  t.config.topics = 1;
  const Run r = capture([&](auto& o, auto& e) { return cmd_train(t, o, e); });
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("topics") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "run"));

  t = small_train(dir / "missing.tokens", dir / "run");
  CHECK(capture([&](auto& o, auto& e) { return cmd_train(t, o, e); }).code == kUsageError);
}

TEST_CASE("topics and eval on a trained checkpoint") {
  test::TempDir dir;
  const auto synth = write_synth(dir);
  const TrainArgs t = small_train(synth / "synth.tokens", dir / "run");
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_train(t, o, e); }).code == kOk);
  const auto ckpt = dir / "run" / kFinalCheckpoint;

  TopicsArgs ta;
  ta.checkpoint = ckpt;
  ta.top_n = 4;
  const Run tr = capture([&](auto& o, auto& e) { return cmd_topics(ta, o, e); });
  REQUIRE(tr.code == kOk);
  const auto tl = lines(tr.out);
  REQUIRE(tl.size() == 3);
  const Checkpoint c = load_checkpoint(ckpt);
  const Tensor tw = topic_word_matrix(c.params);
  const auto vocab = load_vocab(dir / "run" / kVocabFile);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto parts = split(tl[k], '\t');
    CHECK(parts[0] == std::to_string(k));
    const auto words = split(parts[1], ' ');
    REQUIRE(words.size() == 4);
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
      const auto a = std::find(vocab.begin(), vocab.end(), words[i]) - vocab.begin();
      const auto b = std::find(vocab.begin(), vocab.end(), words[i + 1]) - vocab.begin();
      CHECK(tw(k, a) > tw(k, b));
    }
  }
  TopicsArgs defaults;
  CHECK(defaults.top_n == 10);

  std::ofstream(dir / "short.vocab") << "a\nb\n";
  ta.vocab = dir / "short.vocab";
  const Run bad = capture([&](auto& o, auto& e) { return cmd_topics(ta, o, e); });
  CHECK(bad.code == kUsageError);
  CHECK(bad.err.find("18") != std::string::npos);
  CHECK(bad.err.find(" 2 ") != std::string::npos);

  EvalArgs ea;
  ea.checkpoint = ckpt;
  ea.reference = synth / "synth.tokens";
  CHECK(ea.window == 10);
  CHECK(ea.top_n == 10);
  ea.top_n = 5;
  const Run e1 = capture([&](auto& o, auto& e) { return cmd_eval(ea, o, e); });
  const Run e2 = capture([&](auto& o, auto& e) { return cmd_eval(ea, o, e); });
  REQUIRE(e1.code == kOk);
  CHECK(e1.out == e2.out);
  const auto el = lines(e1.out);
  CHECK(el.size() == 1 + 3 + 1);  // header, K topic rows, mean
  CHECK(el[0] == "topic\tnpmi\twords");
  CHECK(el.back().rfind("mean\t", 0) == 0);

  EvalArgs eb = ea;
  eb.reference = synth / "synth.bow";
  eb.reference_format = "bow";
  CHECK(capture([&](auto& o, auto& e) { return cmd_eval(eb, o, e); }).code == kOk);

  ea.reference = dir / "absent.tokens";
  CHECK(capture([&](auto& o, auto& e) { return cmd_eval(ea, o, e); }).code != kOk);
}

TEST_CASE("binary exit codes") {
  test::TempDir dir;
  CHECK(run_binary("") == kUsageError);
  CHECK(run_binary("--help") == kOk);
  CHECK(run_binary("frobnicate") == kUsageError);
  CHECK(run_binary("ingest " + (dir / "none.txt").string() + " --out-dir " + (dir / "o").string()) ==
        kUsageError);
  std::ofstream(dir / "c.txt") << "a b c\nb c d\nc d a\n";
  CHECK(run_binary("train " + (dir / "c.txt").string() + " --format tokens --topics 1 --out-dir " +
                   (dir / "r").string()) == kUsageError);
  CHECK(run_binary("train " + (dir / "c.txt").string() + " --format tokens --topics 2 --epochs 2 "
                   "--batch-size 3 --lr 0.01 --lambda-mmd 1 --alpha 0.1 --seed 3 --out-dir " +
                   (dir / "r").string()) == kOk);
  CHECK(run_binary("topics " + (dir / "r" / "final").string() + " --top-n 3") == kOk);
  CHECK(run_binary("eval " + (dir / "r" / "final").string() + " " + (dir / "c.txt").string() +
                   " --window 2 --top-n 3") == kOk);
}
