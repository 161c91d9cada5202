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
#include <functional>
#include <string>
#include <vector>

#include "dabnet/nn_ops.hpp"
#include "dabnet/rng.hpp"
#include "dabnet/tensor.hpp"

namespace dabnet::selftest {

struct CheckResult {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  double seconds = 0.0;
  std::string first_failure;

  bool passed() const noexcept { return cases > 0 && failures == 0; }
};

/// A randomized convolution problem: spec plus input shape.
struct ConvCase {
  ConvSpec spec;
  Shape4 input;
};

/// Case `index` of the randomized convolution sweep. The index picks the
/// dilation (1, 2, 4, 8, 16), the kernel (1x1, 3x3, 3x1, 1x3) and the grouping
/// (dense, depth-wise, other divisor) so that any 60 consecutive indices cover
/// every combination; channels, extents (<= 16), stride, padding and bias come
/// from `rng`.
ConvCase random_conv_case(Rng& rng, std::int64_t index);

// Differential checks of the fast kernels against the scalar oracle.
CheckResult check_conv2d(std::uint64_t seed, int cases);
CheckResult check_batch_norm(std::uint64_t seed, int cases);
CheckResult check_prelu(std::uint64_t seed, int cases);
CheckResult check_max_pool(std::uint64_t seed, int cases);
CheckResult check_avg_pool(std::uint64_t seed, int cases);
CheckResult check_bilinear(std::uint64_t seed, int cases);

// Algebraic properties of the kernels.
CheckResult check_conv_shape_law(std::uint64_t seed, int cases);
CheckResult check_integer_exact(std::uint64_t seed, int cases);
CheckResult check_grouped_equivalence(std::uint64_t seed, int cases);
CheckResult check_separable(std::uint64_t seed, int cases);
CheckResult check_linearity(std::uint64_t seed, int cases);
CheckResult check_prelu_monotone(std::uint64_t seed, int cases);

// Module and network invariants.
CheckResult check_residual_identity(std::uint64_t seed, int cases);
CheckResult check_module_shape(std::uint64_t seed, int cases);
CheckResult check_network_trace(std::uint64_t seed, int cases);
CheckResult check_param_agreement(std::uint64_t seed, int cases);
CheckResult check_asymmetric_macs(std::uint64_t seed, int cases);

// Metrics and persistence.
CheckResult check_miou(std::uint64_t seed, int cases);
CheckResult check_persistence(std::uint64_t seed, int cases);

/// Runs every check above with `cases` randomized cases each (the network
/// checks use fewer since each case is a full forward pass).
std::vector<CheckResult> run_all(std::uint64_t seed = 0, int cases = 200,
                                 const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace dabnet::selftest
