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

#include "dabnet/nn_ops.hpp"
#include "dabnet/tensor.hpp"

namespace dabnet::oracle {

// Slow scalar kernels. Every element is recomputed from the canonical index
// formula with double accumulation; nothing here is meant to be fast.

Tensor conv2d(const Tensor& input, const Tensor& weight, std::span<const float> bias, const ConvSpec& spec);
Tensor batch_norm(const Tensor& input, const BnParams& p);
Tensor prelu(const Tensor& input, const PreluParams& p);
Tensor max_pool_2x2_s2(const Tensor& input);
Tensor avg_pool(const Tensor& input, std::int64_t factor);
Tensor bilinear_upsample(const Tensor& input, std::int64_t factor);

inline constexpr double kConvTolerance = 1e-5;
inline constexpr double kPointwiseTolerance = 1e-6;
inline constexpr double kAbsoluteFloor = 1e-7;

struct Comparison {
  bool ok = true;
  double max_error = 0.0;   // largest |actual - expected|
  double bound = 0.0;       // allowed |actual - expected|
  std::string detail;       // first offending element, empty when ok
};

/// Passes when every |actual - expected| <= rel * max|expected| + abs_floor.
/// Scaling by the tensor's largest magnitude keeps sums that cancel to near
/// zero from failing on rounding noise in their terms.
Comparison compare(const Tensor& actual, const Tensor& expected, double rel, double abs_floor = kAbsoluteFloor);

}  // namespace dabnet::oracle
