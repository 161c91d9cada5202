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

#include "dabnet/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dabnet/errors.hpp"
#include "dabnet/rng.hpp"

namespace dabnet {

std::size_t Shape4::count() const {
  for (std::int64_t d : {n, c, h, w}) {
    if (d < 0) throw ArgumentError("negative tensor extent in " + to_string());
  }
  // Cap at what a std::vector<float> can hold.
  constexpr auto kLimit = static_cast<unsigned __int128>(std::numeric_limits<std::ptrdiff_t>::max()) /
                          sizeof(float);
  unsigned __int128 total = 1;
  for (std::int64_t d : {n, c, h, w}) {
    total *= static_cast<unsigned __int128>(d);
    if (total > kLimit) throw AllocationError("tensor element count overflows for " + to_string());
  }
  return static_cast<std::size_t>(total);
}

std::string Shape4::to_string() const {
  return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
         std::to_string(w) + ")";
}

Tensor::Tensor(Shape4 shape) : shape_(shape) {
  const std::size_t count = shape.count();
  try {
    data_.assign(count, 0.0f);
  } catch (const std::bad_alloc&) {
    throw AllocationError("cannot allocate tensor " + shape.to_string());
  }
}

Tensor::Tensor(Shape4 shape, std::vector<float> values) : shape_(shape), data_(std::move(values)) {
  if (data_.size() != shape.count()) {
    throw ShapeError("tensor " + shape.to_string() + " needs " + std::to_string(shape.count()) +
                     " values, got " + std::to_string(data_.size()));
  }
}

Tensor Tensor::filled(Shape4 shape, float value) {
  Tensor t(shape);
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

std::array<std::int64_t, 4> Tensor::unflatten(std::size_t index) const {
  auto i = static_cast<std::int64_t>(index);
  const std::int64_t w = i % shape_.w;
  i /= shape_.w;
  const std::int64_t h = i % shape_.h;
  i /= shape_.h;
  const std::int64_t c = i % shape_.c;
  return {i / shape_.c, c, h, w};
}

namespace {

void check_index(const Shape4& s, std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) {
  if (n < 0 || n >= s.n || c < 0 || c >= s.c || h < 0 || h >= s.h || w < 0 || w >= s.w) {
    throw ArgumentError("index (" + std::to_string(n) + "," + std::to_string(c) + "," +
                        std::to_string(h) + "," + std::to_string(w) + ") out of bounds for " +
                        s.to_string());
  }
}

}  // namespace

float& Tensor::at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) {
  check_index(shape_, n, c, h, w);
  return data_[offset(n, c, h, w)];
}

float Tensor::at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const {
  check_index(shape_, n, c, h, w);
  return data_[offset(n, c, h, w)];
}

Tensor& fill_uniform(Tensor& t, Rng& rng, float lo, float hi) {
  if (lo > hi) {
    throw ArgumentError("fill_uniform: lo=" + std::to_string(lo) + " > hi=" + std::to_string(hi));
  }
  for (float& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("add: shape mismatch " + a.shape().to_string() + " vs " +
                     b.shape().to_string());
  }
  Tensor out(a.shape());
  const float* pa = a.data();
  const float* pb = b.data();
  float* po = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) po[i] = pa[i] + pb[i];
  return out;
}

Tensor concat_channels(std::span<const Tensor* const> parts) {
  if (parts.empty()) throw ArgumentError("concat_channels: no inputs");
  const Shape4 first = parts.front()->shape();
  std::int64_t channels = 0;
  for (const Tensor* p : parts) {
    const Shape4& s = p->shape();
    if (s.n != first.n || s.h != first.h || s.w != first.w) {
      throw ShapeError("concat_channels: shape mismatch " + first.to_string() + " vs " +
                       s.to_string());
    }
    channels += s.c;
  }
  Tensor out({first.n, channels, first.h, first.w});
  const std::size_t plane = static_cast<std::size_t>(first.h * first.w);
  for (std::int64_t n = 0; n < first.n; ++n) {
    float* dst = out.plane(n, 0);
    for (const Tensor* p : parts) {
      const std::size_t len = static_cast<std::size_t>(p->shape().c) * plane;
      if (len == 0) continue;
      const float* src = p->plane(n, 0);
      std::copy(src, src + len, dst);
      dst += len;
    }
  }
  return out;
}

Tensor concat_channels(std::initializer_list<const Tensor*> parts) {
  return concat_channels(std::span<const Tensor* const>(parts.begin(), parts.size()));
}

Tensor slice_channels(const Tensor& t, std::int64_t first, std::int64_t count) {
  const Shape4& s = t.shape();
  if (first < 0 || count < 0 || first + count > s.c) {
    throw ShapeError("slice_channels: [" + std::to_string(first) + ", " +
                     std::to_string(first + count) + ") outside " + s.to_string());
  }
  Tensor out({s.n, count, s.h, s.w});
  const std::size_t len = static_cast<std::size_t>(count * s.h * s.w);
  for (std::int64_t n = 0; n < s.n && len > 0; ++n) {
    const float* src = t.plane(n, first);
    std::copy(src, src + len, out.plane(n, 0));
  }
  return out;
}

float max_abs(const Tensor& t) {
  float m = 0.0f;
  for (float v : t.values()) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace dabnet
