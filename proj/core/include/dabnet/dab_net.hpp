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
#include <string>
#include <utility>
#include <vector>

#include "dabnet/label_map.hpp"
#include "dabnet/network_plan.hpp"
#include "dabnet/network_spec.hpp"
#include "dabnet/tensor.hpp"
#include "dabnet/weight_store.hpp"

namespace dabnet {

/// Shapes observed during a forward pass, keyed by plan layer name.
using ForwardTrace = std::vector<std::pair<std::string, Shape4>>;

/// One depth-wise asymmetric bottleneck:
///
///   pre-activation BN+PReLU
///   3x3 conv W -> W/2, BN+PReLU
///   local branch:   depth-wise 3x1 then 1x3, BN+PReLU after each
///   context branch: the same pair dilated by d, BN+PReLU after each
///   branch sum, BN+PReLU
///   1x1 conv W/2 -> W (linear)
///   + identity residual
///
/// Weights are read from `<prefix>.<step>.{conv|bn|prelu}.*`.
Tensor dab_module_forward(const Tensor& x, const DabModuleSpec& spec, const WeightStore& weights,
                          const std::string& prefix);

/// Halves the resolution. When out_channels exceeds the input width the
/// result is concat(3x3/2 conv to out - in channels, 2x2 max pool of x);
/// otherwise a single 3x3/2 conv. BN+PReLU follow in both cases.
Tensor downsample_block(const Tensor& x, std::int64_t out_channels, const WeightStore& weights,
                        const std::string& prefix, float bn_epsilon);

/// Full network: image (n, 3, H, W) -> logits (n, classes, H, W).
Tensor dabnet_forward(const Tensor& image, const NetworkSpec& spec, const WeightStore& weights,
                      ForwardTrace* trace = nullptr);

/// Per-pixel argmax over channels; ties resolve to the lowest class index.
LabelMap predict_labels(const Tensor& logits);

/// Every required entry filled from a seeded uniform [-0.1, 0.1) stream in
/// plan order; batch-norm gamma = 1, beta = 0, mean = 0, var = 1 and PReLU
/// slopes = 0.25.
WeightStore init_random_weights(const NetworkSpec& spec, std::uint64_t seed);
/// Same fill rules for an arbitrary plan; conv weights and biases are uniform
/// in [-conv_scale, conv_scale), or exactly zero when conv_scale is 0.
WeightStore init_plan_weights(const NetworkPlan& plan, std::uint64_t seed, float conv_scale);

/// Throws WeightStoreError naming the first missing, misshapen or extra entry.
void validate_weights(const WeightStore& weights, const NetworkSpec& spec);

}  // namespace dabnet
