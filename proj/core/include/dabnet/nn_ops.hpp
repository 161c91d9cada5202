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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dabnet/tensor.hpp"

namespace dabnet {

/// A (height, width) pair used for kernel extents, strides, padding and dilation.
struct Size2 {
  std::int64_t h = 1;
  std::int64_t w = 1;
  friend bool operator==(const Size2&, const Size2&) = default;
};

/// Full description of one 2-D convolution. Standard, point-wise, depth-wise,
/// asymmetric (k x 1, 1 x k) and dilated convolutions are all parameterizations
/// of this one struct.
struct ConvSpec {
  std::int64_t in_channels = 0;
  std::int64_t out_channels = 0;
  Size2 kernel{1, 1};
  Size2 stride{1, 1};
  Size2 padding{0, 0};
  Size2 dilation{1, 1};
  std::int64_t groups = 1;
  bool has_bias = false;

  /// Throws ArgumentError when the fields violate the group/extent rules.
  void validate() const;
  bool is_depthwise() const noexcept {
    return groups == in_channels && groups == out_channels;
  }
  /// (out_channels, in_channels / groups, kh, kw)
  Shape4 weight_shape() const;
  /// Output spatial extent for a given input extent. Throws DegenerateError
  /// when either side would be smaller than one.
  Size2 output_size(Size2 input) const;
  /// kh * kw * (Cin / groups) * Cout, plus Cout when has_bias.
  std::int64_t param_count() const;
  /// Multiply-accumulates for one image of the given input size.
  std::int64_t macs(Size2 input) const;

  std::string describe() const;
  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

/// k x k standard convolution with "same" padding for stride 1.
ConvSpec standard_conv(std::int64_t in, std::int64_t out, std::int64_t k, std::int64_t stride = 1,
                       bool bias = false);
/// Point-wise (1 x 1) convolution.
ConvSpec pointwise_conv(std::int64_t in, std::int64_t out, bool bias = false);
/// Depth-wise k x 1 (vertical) or 1 x k (horizontal) convolution with dilation
/// d along its long axis and size-preserving padding d * (k - 1) / 2.
ConvSpec depthwise_vertical(std::int64_t channels, std::int64_t k, std::int64_t dilation);
ConvSpec depthwise_horizontal(std::int64_t channels, std::int64_t k, std::int64_t dilation);

/// Inference-mode batch normalization parameters (one entry per channel).
struct BnParams {
  std::vector<float> gamma;
  std::vector<float> beta;
  std::vector<float> running_mean;
  std::vector<float> running_var;
  float epsilon = 1e-3f;

  static BnParams identity(std::int64_t channels, float epsilon = 1e-3f);
  std::int64_t channels() const noexcept { return static_cast<std::int64_t>(gamma.size()); }
  /// Throws ShapeError when vector lengths disagree with channels.
  void validate(std::int64_t channels) const;
};

struct PreluParams {
  std::vector<float> slope;

  static PreluParams constant(std::int64_t channels, float a);
  std::int64_t channels() const noexcept { return static_cast<std::int64_t>(slope.size()); }
};

/// Cross-correlation with zero padding. bias must be empty unless
/// spec.has_bias, in which case it holds out_channels values.
Tensor conv2d(const Tensor& input, const Tensor& weight, std::span<const float> bias,
              const ConvSpec& spec);

Tensor batch_norm_infer(const Tensor& input, const BnParams& p);
Tensor prelu(const Tensor& input, const PreluParams& p);
void batch_norm_infer_inplace(Tensor& t, const BnParams& p);
void prelu_inplace(Tensor& t, const PreluParams& p);
/// prelu(batch_norm_infer(t)) in one pass; bit-identical to the two calls.
void batch_norm_prelu_inplace(Tensor& t, const BnParams& bn, const PreluParams& act);

/// 2x2 max pooling with stride 2; an odd trailing row or column is dropped.
Tensor max_pool_2x2_s2(const Tensor& input);
/// Non-overlapping factor x factor mean pooling. factor must be a power of two
/// dividing both H and W.
Tensor avg_pool_downsample(const Tensor& input, std::int64_t factor);
/// Bilinear resize by an integer factor with half-pixel centers
/// (align_corners = false) and edge clamping.
Tensor bilinear_upsample(const Tensor& input, std::int64_t factor);

}  // namespace dabnet
