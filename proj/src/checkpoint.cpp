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

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "gtm/errors.hpp"
#include "gtm/model.hpp"

namespace gtm {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic = {'G', 'T', 'M', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ofstream& out) : out_(out) {}
  template <typename T>
  void pod(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void str(const std::string& s) {
    pod(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void tensor(const std::string& name, const Tensor& t) {
    str(name);
    pod(static_cast<std::uint64_t>(t.rows()));
    pod(static_cast<std::uint64_t>(t.cols()));
    out_.write(reinterpret_cast<const char*>(t.data().data()),
               static_cast<std::streamsize>(t.size() * sizeof(double)));
  }

 private:
  std::ofstream& out_;
};

class Reader {
 public:
  Reader(std::ifstream& in, std::string path) : in_(in), path_(std::move(path)) {}
  template <typename T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) fail("truncated file");
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint32_t>();
    if (n > 4096) fail("implausible string length");
    std::string s(n, '\0');
    in_.read(s.data(), n);
    if (!in_) fail("truncated file");
    return s;
  }
  Tensor tensor(const std::string& expected_name, std::size_t rows, std::size_t cols) {
    const std::string name = str();
    if (name != expected_name) fail("expected tensor '" + expected_name + "', found '" + name + "'");
    const auto r = pod<std::uint64_t>();
    const auto c = pod<std::uint64_t>();
    if (r != rows || c != cols) {
      fail("tensor '" + name + "' has shape " + std::to_string(r) + "x" + std::to_string(c) +
           ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    Tensor t(rows, cols);
    in_.read(reinterpret_cast<char*>(t.data().data()),
             static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!in_) fail("truncated file");
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw Error("checkpoint '" + path_ + "': " + msg);
  }

 private:
  std::ifstream& in_;
  std::string path_;
};

struct NamedTensor {
  std::string name;
  Tensor* tensor;
};

// Serialization order: trainable tensors, then running statistics.
std::vector<NamedTensor> all_tensors(ModelParams& p) {
  std::vector<NamedTensor> out;
  const auto& names = ModelParams::trainable_names();
  auto tr = p.trainable();
  for (std::size_t i = 0; i < tr.size(); ++i) out.push_back({names[i], tr[i]});
  out.push_back({"enc_bn0.running_mean", &p.enc_bn0.state.running_mean});
  out.push_back({"enc_bn0.running_var", &p.enc_bn0.state.running_var});
  out.push_back({"enc_bn1.running_mean", &p.enc_bn1.state.running_mean});
  out.push_back({"enc_bn1.running_var", &p.enc_bn1.state.running_var});
  out.push_back({"dec_bn0.running_mean", &p.dec_bn0.state.running_mean});
  out.push_back({"dec_bn0.running_var", &p.dec_bn0.state.running_var});
  return out;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params,
                     std::uint64_t seed) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write checkpoint '" + tmp.string() + "'");
    Writer w(out);
    out.write(kMagic.data(), kMagic.size());
    w.pod(kVersion);
    const ModelConfig& c = params.config;
    for (std::uint64_t v : {std::uint64_t{c.n_docs}, std::uint64_t{c.n_words},
                            std::uint64_t{c.topics}, std::uint64_t{c.enc_hidden},
                            std::uint64_t{c.dec_hidden}, seed})
      w.pod(v);
    w.pod(c.leaky_slope);
    auto tensors = all_tensors(const_cast<ModelParams&>(params));
    w.pod(static_cast<std::uint32_t>(tensors.size()));
    for (const auto& nt : tensors) w.tensor(nt.name, *nt.tensor);
    if (!out) throw Error("failed writing checkpoint '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint '" + path.string() + "'");
  Reader r(in, path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) r.fail("not a GTM checkpoint");
  const auto version = r.pod<std::uint32_t>();
  if (version != kVersion) r.fail("unsupported version " + std::to_string(version));

  Checkpoint ck;
  ModelConfig c;
  c.n_docs = r.pod<std::uint64_t>();
  c.n_words = r.pod<std::uint64_t>();
  c.topics = r.pod<std::uint64_t>();
  c.enc_hidden = r.pod<std::uint64_t>();
  c.dec_hidden = r.pod<std::uint64_t>();
  ck.seed = r.pod<std::uint64_t>();
  c.leaky_slope = r.pod<double>();
  c.validate();

  // Shapes come from a freshly laid-out model of the same config.
  ModelParams& p = ck.params;
  p.config = c;
  p.enc_w0 = Tensor(c.num_nodes(), c.enc_hidden);
  p.enc_bn0 = BatchNormLayer::make(c.enc_hidden);
  p.enc_w1 = Tensor(c.enc_hidden, c.topics);
  p.enc_bn1 = BatchNormLayer::make(c.topics);
  p.dec_w0 = Tensor(c.topics, c.dec_hidden);
  p.dec_b0 = Tensor(1, c.dec_hidden);
  p.dec_bn0 = BatchNormLayer::make(c.dec_hidden);
  p.dec_w1 = Tensor(c.dec_hidden, c.n_words);
  p.dec_b1 = Tensor(1, c.n_words);

  auto tensors = all_tensors(p);
  const auto count = r.pod<std::uint32_t>();
  if (count != tensors.size()) r.fail("unexpected tensor count " + std::to_string(count));
  for (auto& nt : tensors)
    *nt.tensor = r.tensor(nt.name, nt.tensor->rows(), nt.tensor->cols());
  return ck;
}

}  // namespace gtm
