// Copyright 2026 The uposi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uposi/network_io.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace uposi {
namespace {

constexpr std::array<char, 8> kMagic = {'U', 'P', 'O', 'S', 'I', 'N', 'E', 'T'};
constexpr std::uint32_t kKindDense = 1;
constexpr std::uint32_t kKindPolicy = 2;
constexpr std::uint32_t kActivationTanh = 1;

class Writer {
 public:
  void U32(std::uint32_t v) { Bytes(v, 4); }
  void U64(std::uint64_t v) { Bytes(v, 8); }
  void F64(double v) { Bytes(std::bit_cast<std::uint64_t>(v), 8); }
  void Raw(const char* p, size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::string& buffer() const { return buf_; }

 private:
  void Bytes(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>(v >> (8 * i)));
  }
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string path)
      : data_(std::move(data)), path_(std::move(path)) {}

  std::uint32_t U32() { return static_cast<std::uint32_t>(Bytes(4)); }
  std::uint64_t U64() { return Bytes(8); }
  double F64() { return std::bit_cast<double>(Bytes(8)); }
  void Raw(char* out, size_t n) {
    Need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  bool AtEnd() const { return pos_ == data_.size(); }
  const std::string& path() const { return path_; }

 private:
  void Need(size_t n) {
    if (data_.size() - pos_ < n) {
      throw FormatError("network file " + path_ + " is truncated");
    }
  }
  std::uint64_t Bytes(int n) {
    Need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += n;
    return v;
  }
  std::string data_;
  std::string path_;
  size_t pos_ = 0;
};

void WriteHeader(Writer& w, std::uint32_t kind, const DenseNetwork& net) {
  w.Raw(kMagic.data(), kMagic.size());
  w.U32(kNetworkFormatVersion);
  w.U32(kind);
  w.U32(kActivationTanh);
  w.F64(net.dropout_rate());
  w.U32(static_cast<std::uint32_t>(net.layer_dims().size()));
  for (int d : net.layer_dims()) w.U32(static_cast<std::uint32_t>(d));
  const Vector params = net.GetParams();
  w.U64(static_cast<std::uint64_t>(params.size()));
  for (double p : params) w.F64(p);
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Reader ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return Reader(std::move(data), path.string());
}

DenseNetwork ReadNetwork(Reader& r, std::uint32_t expected_kind,
                         const std::optional<std::vector<int>>& expected_dims) {
  std::array<char, 8> magic{};
  r.Raw(magic.data(), magic.size());
  if (magic != kMagic) {
    throw FormatError(r.path() + " is not a network file (bad magic)");
  }
  const std::uint32_t version = r.U32();
  if (version != kNetworkFormatVersion) {
    throw FormatError(r.path() + " has format version " +
                      std::to_string(version) + ", expected " +
                      std::to_string(kNetworkFormatVersion));
  }
  const std::uint32_t kind = r.U32();
  if (kind != expected_kind) {
    throw FormatError(r.path() + " holds network kind " +
                      std::to_string(kind) + ", expected " +
                      std::to_string(expected_kind));
  }
  if (r.U32() != kActivationTanh) {
    throw FormatError(r.path() + " uses an unknown activation tag");
  }
  const double dropout = r.F64();
  const std::uint32_t num_dims = r.U32();
  if (num_dims < 2 || num_dims > 64) {
    throw FormatError(r.path() + " declares an invalid layer count");
  }
  std::vector<int> dims(num_dims);
  for (auto& d : dims) {
    const std::uint32_t v = r.U32();
    if (v == 0 || v > (1u << 20)) {
      throw FormatError(r.path() + " declares an invalid layer width");
    }
    d = static_cast<int>(v);
  }
  if (expected_dims && *expected_dims != dims) {
    throw ShapeMismatchError(r.path() +
                             ": layer dims differ from the expected shape");
  }
  DenseNetwork net(dims, dropout);
  const std::uint64_t count = r.U64();
  if (count != static_cast<std::uint64_t>(net.num_params())) {
    throw ShapeMismatchError(r.path() + ": header layer dims imply " +
                             std::to_string(net.num_params()) +
                             " parameters but the payload declares " +
                             std::to_string(count));
  }
  Vector params(net.num_params());
  for (auto& p : params) p = r.F64();
  net.SetParams(params);
  return net;
}

}  // namespace

void SaveNetwork(const DenseNetwork& net, const std::filesystem::path& path) {
  Writer w;
  WriteHeader(w, kKindDense, net);
  WriteFile(path, w.buffer());
}

DenseNetwork LoadNetwork(const std::filesystem::path& path,
                         const std::optional<std::vector<int>>& expected_dims) {
  Reader r = ReadFile(path);
  DenseNetwork net = ReadNetwork(r, kKindDense, expected_dims);
  if (!r.AtEnd()) throw FormatError(path.string() + " has trailing bytes");
  return net;
}

void SavePolicy(const GaussianPolicy& policy,
                const std::filesystem::path& path) {
  Writer w;
  WriteHeader(w, kKindPolicy, policy.mean_net());
  w.U32(static_cast<std::uint32_t>(policy.obs_dim()));
  w.U32(static_cast<std::uint32_t>(policy.mu_dim()));
  for (double v : policy.log_std()) w.F64(v);
  WriteFile(path, w.buffer());
}

GaussianPolicy LoadPolicy(const std::filesystem::path& path) {
  Reader r = ReadFile(path);
  DenseNetwork net = ReadNetwork(r, kKindPolicy, std::nullopt);
  const int obs_dim = static_cast<int>(r.U32());
  const int mu_dim = static_cast<int>(r.U32());
  if (obs_dim + mu_dim != net.input_dim()) {
    throw ShapeMismatchError(path.string() +
                             ": policy dims disagree with the mean network");
  }
  Vector log_std(net.output_dim());
  for (auto& v : log_std) v = r.F64();
  if (!r.AtEnd()) throw FormatError(path.string() + " has trailing bytes");
  return GaussianPolicy(obs_dim, mu_dim, std::move(net), std::move(log_std));
}

}  // namespace uposi
