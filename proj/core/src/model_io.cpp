/* Copyright 2026 The dabnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dabnet/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <unordered_set>

#include "dabnet/dab_net.hpp"
#include "dabnet/errors.hpp"

namespace dabnet {
namespace {

constexpr std::array<char, 4> kDabwMagic{'D', 'A', 'B', 'W'};
constexpr std::array<char, 4> kTnsMagic{'T', 'N', 'S', '1'};

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::byte*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { out_.push_back(static_cast<std::byte>(v)); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32s(std::span<const float> values) {
    out_.reserve(out_.size() + values.size() * 4);
    for (float f : values) u32(std::bit_cast<std::uint32_t>(f));
  }
  std::vector<std::byte> take() { return std::move(out_); }

 private:
  std::vector<std::byte> out_;
};

class Reader {
 public:
  Reader(std::span<const std::byte> in, const char* what) : in_(in), what_(what) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return in_.size() - pos_; }

  std::span<const std::byte> take(std::size_t n) {
    if (remaining() < n) {
      throw TruncationError(std::string(what_) + ": need " + std::to_string(n) + " more bytes, " +
                                std::to_string(remaining()) + " left",
                            pos_);
    }
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint16_t u16() {
    const auto b = take(2);
    return static_cast<std::uint16_t>(static_cast<unsigned>(b[0]) | (static_cast<unsigned>(b[1]) << 8));
  }
  std::uint32_t u32() {
    const auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint32_t>(b[static_cast<std::size_t>(i)]);
    return v;
  }
  void f32s(std::span<float> out) {
    const auto b = take(out.size() * 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::uint32_t v = 0;
      for (int j = 3; j >= 0; --j) v = (v << 8) | static_cast<std::uint32_t>(b[i * 4 + static_cast<std::size_t>(j)]);
      out[i] = std::bit_cast<float>(v);
    }
  }
  void expect_magic(const std::array<char, 4>& magic) {
    const auto b = take(4);
    if (std::memcmp(b.data(), magic.data(), 4) != 0) {
      throw FormatError(std::string(what_) + ": bad magic, expected '" + std::string(magic.data(), 4) + "'");
    }
  }

 private:
  std::span<const std::byte> in_;
  const char* what_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::int64_t v, const std::string& what) {
  if (v < 0 || v > static_cast<std::int64_t>(UINT32_MAX)) {
    throw FormatError(what + " extent " + std::to_string(v) + " does not fit in u32");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::byte> encode_weights(const WeightStore& store) {
  Writer w;
  w.bytes(kDabwMagic.data(), 4);
  w.u32(kDabwVersion);
  w.u32(checked_u32(static_cast<std::int64_t>(store.size()), "record count"));
  for (const auto& [name, t] : store) {
    if (name.empty() || name.size() > UINT16_MAX) throw FormatError("weight name length out of range: '" + name + "'");
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.u8(0);
    w.u8(4);
    const Shape4& s = t.shape();
    for (std::int64_t d : {s.n, s.c, s.h, s.w}) w.u32(checked_u32(d, name));
    w.f32s(t.values());
  }
  return w.take();
}

WeightStore decode_weights(std::span<const std::byte> bytes) {
  Reader r(bytes, ".dabw");
  r.expect_magic(kDabwMagic);
  const std::uint32_t version = r.u32();
  if (version != kDabwVersion) throw FormatError(".dabw: unsupported version " + std::to_string(version));
  const std::uint32_t count = r.u32();
  WeightStore store;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t record_start = r.offset();
    const std::uint16_t len = r.u16();
    if (len == 0) throw FormatError(".dabw: empty record name at offset " + std::to_string(record_start));
    const auto raw = r.take(len);
    std::string name(reinterpret_cast<const char*>(raw.data()), raw.size());
    const std::uint8_t dtype = r.u8();
    if (dtype != 0) {
      throw FormatError(".dabw: record '" + name + "' has unsupported dtype " + std::to_string(dtype));
    }
    const std::uint8_t ndim = r.u8();
    if (ndim < 1 || ndim > 4) {
      throw FormatError(".dabw: record '" + name + "' has unsupported rank " + std::to_string(ndim));
    }
    std::array<std::int64_t, 4> dims{1, 1, 1, 1};
    for (std::uint8_t d = 0; d < ndim; ++d) dims[d] = r.u32();
    const Shape4 shape{dims[0], dims[1], dims[2], dims[3]};
    const std::size_t elements = shape.count();
    if (elements > r.remaining() / 4) {
      throw TruncationError(".dabw: payload of '" + name + "' needs " + std::to_string(elements * 4) +
                                " bytes, " + std::to_string(r.remaining()) + " left",
                            r.offset());
    }
    std::vector<float> values(elements);
    r.f32s(values);
    if (store.contains(name)) throw FormatError(".dabw: duplicate record name '" + name + "'");
    store.insert(std::move(name), Tensor(shape, std::move(values)));
  }
  if (r.remaining() != 0) {
    throw FormatError(".dabw: " + std::to_string(r.remaining()) + " trailing bytes after record " +
                      std::to_string(count));
  }
  return store;
}

void save_weights(const WeightStore& store, const std::filesystem::path& path) {
  write_file(path, encode_weights(store));
}

WeightStore load_weights(const std::filesystem::path& path, const std::optional<NetworkSpec>& spec) {
  WeightStore store = decode_weights(read_file(path));
  if (spec) validate_weights(store, *spec);
  return store;
}

std::vector<std::byte> encode_tensor(const Tensor& t) {
  Writer w;
  w.bytes(kTnsMagic.data(), 4);
  const Shape4& s = t.shape();
  for (std::int64_t d : {s.n, s.c, s.h, s.w}) w.u32(checked_u32(d, "tensor"));
  w.f32s(t.values());
  return w.take();
}

Tensor decode_tensor(std::span<const std::byte> bytes) {
  Reader r(bytes, ".tns");
  r.expect_magic(kTnsMagic);
  std::array<std::int64_t, 4> dims{};
  for (auto& d : dims) d = r.u32();
  const Shape4 shape{dims[0], dims[1], dims[2], dims[3]};
  const std::size_t elements = shape.count();
  if (elements > r.remaining() / 4) {
    throw TruncationError(".tns: payload needs " + std::to_string(elements * 4) + " bytes, " +
                              std::to_string(r.remaining()) + " left",
                          r.offset());
  }
  std::vector<float> values(elements);
  r.f32s(values);
  if (r.remaining() != 0) throw FormatError(".tns: " + std::to_string(r.remaining()) + " trailing bytes");
  return Tensor(shape, std::move(values));
}

void save_tensor(const Tensor& t, const std::filesystem::path& path) { write_file(path, encode_tensor(t)); }

Tensor load_tensor(const std::filesystem::path& path) { return decode_tensor(read_file(path)); }

Tensor preprocess(const Tensor& image, const std::array<float, 3>& means) {
  const Shape4& s = image.shape();
  if (s.c != 3) throw ShapeError("preprocess expects 3 channels, got " + s.to_string());
  Tensor out = image;
  const std::int64_t plane = s.h * s.w;
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < 3; ++c) {
      float* p = out.plane(n, c);
      const float m = means[static_cast<std::size_t>(c)];
      for (std::int64_t i = 0; i < plane; ++i) p[i] -= m;
    }
  }
  return out;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  if (size < 0) throw IoError("cannot determine size of '" + path.string() + "'");
  in.seekg(0, std::ios::beg);
  std::vector<std::byte> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw IoError("failed reading '" + path.string() + "'");
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace dabnet
