// SPDX-FileCopyrightText: 2026 pcup authors
// SPDX-License-Identifier: Apache-2.0

#include "pcup/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

#include "pcup/error.hpp"

namespace pcup::nn {
namespace {

constexpr std::string_view kMagic = "PCUPv1";

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> bytes(std::size_t n) {
    if (n > in_.size() - pos_) fail(Errc::ParseError, "checkpoint is truncated");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

// Guards against absurd sizes in corrupt files before allocating.
std::size_t bounded(std::uint64_t v, std::size_t limit, const char* what) {
  if (v > limit) fail(Errc::ParseError, std::string("checkpoint ") + what + " is implausible");
  return std::size_t(v);
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const ModelSpec& spec, const ParameterStore& params) {
  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(spec.network_id());
  const NetworkConfig& c = spec.net;
  w.u64(c.k1);
  w.u64(c.k2);
  w.u64(c.feature_width);
  w.u64(c.rdb_layers);
  w.u64(c.rdb_growth);
  w.u64(c.patch_size);
  w.u64(std::uint64_t(c.rate));
  w.u64(c.dlai_channels.size());
  for (std::size_t ch : c.dlai_channels) w.u64(ch);
  w.u64(params.size());
  for (const auto& [name, e] : params.entries()) {
    w.u64(name.size());
    w.bytes(name.data(), name.size());
    w.u64(e.value.rank());
    for (std::size_t d : e.value.shape()) w.u64(d);
    for (float v : e.value.values()) w.f32(v);
  }
  return w.take();
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    fail(Errc::IncompatibleCheckpoint, "not a pcup checkpoint (bad magic)");
  }
  Reader r(bytes);
  r.bytes(kMagic.size());
  Checkpoint ck;
  const std::uint32_t id = r.u32();
  if (id & ~std::uint32_t(kDlaiBit | kAemBit)) {
    fail(Errc::IncompatibleCheckpoint, "unknown network id " + std::to_string(id));
  }
  ck.spec.dlai = (id & kDlaiBit) != 0;
  ck.spec.aem = (id & kAemBit) != 0;
  NetworkConfig& c = ck.spec.net;
  const std::size_t big = std::size_t(1) << 32;
  c.k1 = bounded(r.u64(), big, "k1");
  c.k2 = bounded(r.u64(), big, "k2");
  c.feature_width = bounded(r.u64(), big, "feature width");
  c.rdb_layers = bounded(r.u64(), big, "RDB depth");
  c.rdb_growth = bounded(r.u64(), big, "RDB growth");
  c.patch_size = bounded(r.u64(), big, "patch size");
  c.rate = int(bounded(r.u64(), 1u << 20, "rate"));
  c.dlai_channels.resize(bounded(r.u64(), r.remaining() / 8, "channel count"));
  for (auto& ch : c.dlai_channels) ch = bounded(r.u64(), big, "channel width");

  const std::size_t count = bounded(r.u64(), r.remaining(), "parameter count");
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t len = bounded(r.u64(), r.remaining(), "name length");
    const auto name_bytes = r.bytes(len);
    std::string name(name_bytes.begin(), name_bytes.end());
    const std::size_t rank = bounded(r.u64(), 16, "rank");
    std::vector<std::size_t> shape(rank);
    std::size_t numel = 1;
    for (auto& d : shape) {
      d = bounded(r.u64(), r.remaining(), "dimension");
      numel *= d;
    }
    if (numel > r.remaining() / 4) fail(Errc::ParseError, "checkpoint is truncated");
    std::vector<float> data(numel);
    for (float& v : data) v = r.f32();
    ck.params.add(name, Tensor(std::move(shape), std::move(data)));
  }
  if (r.remaining() != 0) fail(Errc::ParseError, "trailing bytes after checkpoint");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const ModelSpec& spec,
                     const ParameterStore& params) {
  const auto bytes = encode_checkpoint(spec, params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) fail(Errc::IoError, "failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    fail(Errc::MissingCheckpoint, "checkpoint not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot read checkpoint " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

Checkpoint load_checkpoint(const std::filesystem::path& path, const ModelSpec& expected) {
  Checkpoint ck = load_checkpoint(path);
  if (ck.spec.dlai != expected.dlai || ck.spec.aem != expected.aem) {
    fail(Errc::IncompatibleCheckpoint, "checkpoint holds networks " +
                                           std::to_string(ck.spec.network_id()) +
                                           ", expected " +
                                           std::to_string(expected.network_id()));
  }
  if (!(ck.spec.net == expected.net)) {
    fail(Errc::IncompatibleCheckpoint, "checkpoint configuration differs from the requested one");
  }
  return ck;
}

}  // namespace pcup::nn
