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

#include "dabnet/netpbm.hpp"

#include <cmath>
#include <string>

#include "dabnet/errors.hpp"
#include "dabnet/model_io.hpp"

namespace dabnet {
namespace {

struct Header {
  char kind = 0;  // '5' or '6'
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::size_t raster_offset = 0;
};

bool is_space(std::byte b) {
  const auto c = static_cast<char>(b);
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderParser {
 public:
  explicit HeaderParser(std::span<const std::byte> in) : in_(in) {}

  void skip_space_and_comments() {
    while (pos_ < in_.size()) {
      if (is_space(in_[pos_])) {
        ++pos_;
      } else if (static_cast<char>(in_[pos_]) == '#') {
        while (pos_ < in_.size() && static_cast<char>(in_[pos_]) != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::int64_t number(const char* field) {
    skip_space_and_comments();
    if (pos_ >= in_.size()) throw TruncationError(std::string("netpbm header ends before ") + field, pos_);
    std::int64_t v = 0;
    std::size_t digits = 0;
    while (pos_ < in_.size()) {
      const auto c = static_cast<char>(in_[pos_]);
      if (c < '0' || c > '9') break;
      v = v * 10 + (c - '0');
      if (v > (1LL << 31)) throw FormatError(std::string("netpbm ") + field + " is too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw FormatError(std::string("netpbm header: expected ") + field + " at byte " + std::to_string(pos_));
    return v;
  }

  std::size_t pos_ = 0;
  std::span<const std::byte> in_;
};

Header parse_header(std::span<const std::byte> bytes, char expected) {
  if (bytes.size() < 2) throw TruncationError("netpbm file too short for magic number", bytes.size());
  if (static_cast<char>(bytes[0]) != 'P') throw FormatError("not a netpbm file (missing 'P' magic)");
  const auto kind = static_cast<char>(bytes[1]);
  if (kind == '2' || kind == '3') {
    throw UnsupportedFormatError(std::string("ASCII netpbm P") + kind + " is not supported; use binary P5/P6");
  }
  if (kind != expected) {
    throw UnsupportedFormatError(std::string("expected netpbm P") + expected + ", got P" + kind);
  }
  HeaderParser p(bytes);
  p.pos_ = 2;
  if (p.pos_ < bytes.size() && !is_space(bytes[p.pos_]) && static_cast<char>(bytes[p.pos_]) != '#') {
    throw FormatError("netpbm magic must be followed by whitespace");
  }
  Header h;
  h.kind = kind;
  h.width = p.number("width");
  h.height = p.number("height");
  const std::int64_t maxval = p.number("maxval");
  if (maxval != 255) throw UnsupportedFormatError("netpbm maxval " + std::to_string(maxval) + " is not supported (need 255)");
  if (h.width < 1 || h.height < 1) throw FormatError("netpbm image has zero width or height");
  if (p.pos_ >= bytes.size() || !is_space(bytes[p.pos_])) {
    throw FormatError("netpbm maxval must be followed by a single whitespace byte");
  }
  h.raster_offset = p.pos_ + 1;
  return h;
}

std::span<const std::byte> raster(std::span<const std::byte> bytes, const Header& h, std::int64_t channels) {
  const auto need = static_cast<std::size_t>(h.width * h.height * channels);
  if (bytes.size() - h.raster_offset < need) {
    throw TruncationError("netpbm raster needs " + std::to_string(need) + " bytes, " +
                              std::to_string(bytes.size() - h.raster_offset) + " present",
                          bytes.size());
  }
  return bytes.subspan(h.raster_offset, need);
}

void put_header(std::vector<std::byte>& out, char kind, std::int64_t w, std::int64_t h) {
  const std::string header = std::string("P") + kind + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (char c : header) out.push_back(static_cast<std::byte>(c));
}

}  // namespace

Tensor decode_ppm(std::span<const std::byte> bytes) {
  const Header h = parse_header(bytes, '6');
  const auto px = raster(bytes, h, 3);
  Tensor image({1, 3, h.height, h.width});
  const std::int64_t plane = h.width * h.height;
  for (std::int64_t c = 0; c < 3; ++c) {
    float* dst = image.plane(0, c);
    for (std::int64_t i = 0; i < plane; ++i) {
      dst[i] = static_cast<float>(static_cast<unsigned>(px[static_cast<std::size_t>(i * 3 + c)])) / 255.0f;
    }
  }
  return image;
}

Tensor load_image_ppm(const std::filesystem::path& path) { return decode_ppm(read_file(path)); }

std::vector<std::byte> encode_ppm(const Tensor& image) {
  const Shape4& s = image.shape();
  if (s.n != 1 || s.c != 3) throw ShapeError("PPM encoding needs a (1,3,H,W) tensor, got " + s.to_string());
  std::vector<std::byte> out;
  put_header(out, '6', s.w, s.h);
  const std::int64_t plane = s.h * s.w;
  out.reserve(out.size() + static_cast<std::size_t>(plane * 3));
  for (std::int64_t i = 0; i < plane; ++i) {
    for (std::int64_t c = 0; c < 3; ++c) {
      float v = image.plane(0, c)[i];
      v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
      out.push_back(static_cast<std::byte>(static_cast<unsigned>(std::lround(v * 255.0f))));
    }
  }
  return out;
}

void save_image_ppm(const Tensor& image, const std::filesystem::path& path) { write_file(path, encode_ppm(image)); }

LabelMap decode_pgm(std::span<const std::byte> bytes) {
  const Header h = parse_header(bytes, '5');
  const auto px = raster(bytes, h, 1);
  LabelMap labels(1, h.height, h.width);
  for (std::size_t i = 0; i < px.size(); ++i) labels.labels[i] = static_cast<std::int32_t>(px[i]);
  return labels;
}

LabelMap load_labels_pgm(const std::filesystem::path& path) { return decode_pgm(read_file(path)); }

std::vector<std::byte> encode_pgm(const LabelMap& labels) {
  if (labels.n != 1) throw ShapeError("PGM encoding needs a single label map, got " + labels.dims());
  std::vector<std::byte> out;
  put_header(out, '5', labels.w, labels.h);
  out.reserve(out.size() + labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::int32_t v = labels.labels[i];
    if (v < 0 || v > 255) {
      throw DataError("label " + std::to_string(v) + " at pixel " + std::to_string(i) + " does not fit in a PGM byte");
    }
    out.push_back(static_cast<std::byte>(v));
  }
  return out;
}

void save_labels_pgm(const LabelMap& labels, const std::filesystem::path& path) {
  write_file(path, encode_pgm(labels));
}

}  // namespace dabnet
