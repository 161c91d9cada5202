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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dabnet {

class Rng;

/// Dimensions of a dense NCHW tensor. All four extents are non-negative.
struct Shape4 {
  std::int64_t n = 0;
  std::int64_t c = 0;
  std::int64_t h = 0;
  std::int64_t w = 0;

  /// Element count n*c*h*w. Throws AllocationError if the product overflows.
  std::size_t count() const;
  std::string to_string() const;

  friend bool operator==(const Shape4&, const Shape4&) = default;
};

/// Dense 4-D float tensor, row-major with index order n -> c -> h -> w.
///
/// The element at (n, c, h, w) lives at ((n*C + c)*H + h)*W + w; there are no
/// strided views. Copies are deep.
class Tensor {
 public:
  Tensor() = default;
  /// Zero-filled tensor. Throws ArgumentError on a negative extent and
  /// AllocationError if the element count cannot be represented.
  explicit Tensor(Shape4 shape);
  Tensor(Shape4 shape, std::vector<float> values);

  static Tensor zeros(Shape4 shape) { return Tensor(shape); }
  static Tensor filled(Shape4 shape, float value);

  const Shape4& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }
  float* data() noexcept { return data_.data(); }
  const float* data() const noexcept { return data_.data(); }

  std::size_t offset(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const noexcept {
    return static_cast<std::size_t>(((n * shape_.c + c) * shape_.h + h) * shape_.w + w);
  }
  /// Inverse of offset(): (n, c, h, w) for a flat index.
  std::array<std::int64_t, 4> unflatten(std::size_t index) const;

  float& at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w);
  float at(std::int64_t n, std::int64_t c, std::int64_t h, std::int64_t w) const;

  /// Pointer to the contiguous H*W plane of image n, channel c.
  float* plane(std::int64_t n, std::int64_t c) noexcept { return data_.data() + offset(n, c, 0, 0); }
  const float* plane(std::int64_t n, std::int64_t c) const noexcept {
    return data_.data() + offset(n, c, 0, 0);
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape4 shape_;
  std::vector<float> data_;
};

/// Fills t with values drawn uniformly from [lo, hi). lo == hi yields lo.
Tensor& fill_uniform(Tensor& t, Rng& rng, float lo, float hi);

Tensor add(const Tensor& a, const Tensor& b);
/// Concatenates along channels, inputs appear in argument order.
Tensor concat_channels(std::span<const Tensor* const> parts);
Tensor concat_channels(std::initializer_list<const Tensor*> parts);
/// Channels [first, first + count) of t.
Tensor slice_channels(const Tensor& t, std::int64_t first, std::int64_t count);

float max_abs(const Tensor& t);

}  // namespace dabnet
