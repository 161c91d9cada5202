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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dabnet/network_spec.hpp"
#include "dabnet/nn_ops.hpp"
#include "dabnet/tensor.hpp"

namespace dabnet {

enum class LayerKind { kConv, kBatchNorm, kPrelu, kMaxPool, kAvgPool, kConcat, kAdd, kUpsample };

std::string_view to_string(LayerKind kind);

/// One primitive operation of the unrolled network, with its output shape
/// (batch 1), learnable parameter count, MACs and the receptive field after it.
///
/// Receptive field follows r' = r + (k - 1) * d * j and j' = j * s, tracked
/// per axis so that k x 1 / 1 x k pairs grow each axis once. Branch merges
/// (add, concat) take the maximum over their inputs. Bilinear upsampling does
/// not enlarge the receptive field.
struct LayerRecord {
  std::string name;
  LayerKind kind = LayerKind::kConv;
  Shape4 output;
  std::optional<ConvSpec> conv;
  std::int64_t params = 0;
  std::int64_t macs = 0;
  std::int64_t rf_h = 1;
  std::int64_t rf_w = 1;
  std::int64_t jump = 1;
  // False for layers on a branch whose receptive field is dominated by a
  // sibling (image shortcuts, the max-pool half of a downsample block, the
  // undilated local branch of a DAB module).
  bool main_path = true;

  std::int64_t receptive_field() const noexcept { return rf_h > rf_w ? rf_h : rf_w; }
};

/// A weight tensor the network requires, with its stored shape. Batch-norm
/// running statistics are stored but not learnable.
struct WeightEntry {
  std::string name;
  Shape4 shape;
  bool learnable = true;
};

struct NetworkPlan {
  Size2 input;
  std::vector<LayerRecord> layers;
  std::vector<WeightEntry> weights;

  /// Throws ArgumentError for unknown names.
  const LayerRecord& layer(std::string_view name) const;
  std::int64_t total_params() const;
  std::int64_t total_macs() const;
};

/// Unrolls the network for a given input size (batch 1). Layer names are the
/// weight prefixes: `stage.<i>.{conv|bn|prelu}` for the stem, shortcut and
/// downsampling layers and `block<k>.mod<j>.<step>.{conv|bn|prelu}` inside DAB
/// modules, where step is one of pre, reduce, local_v, local_h, context_v,
/// context_h, merge, project.
NetworkPlan build_plan(const NetworkSpec& spec, Size2 input = {512, 1024});

/// Plan of a single DAB module on a (1, W, h, w) input under `prefix`.
NetworkPlan build_module_plan(const DabModuleSpec& spec, Size2 input, const std::string& prefix);

namespace names {

std::string stage(int index);
std::string module(int block, int index);

}  // namespace names

}  // namespace dabnet
