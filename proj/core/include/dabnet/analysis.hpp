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
#include <iosfwd>
#include <string>
#include <vector>

#include "dabnet/network_plan.hpp"
#include "dabnet/network_spec.hpp"
#include "dabnet/weight_store.hpp"

namespace dabnet {

/// Static cost of one layer. Parameters count conv weights and biases,
/// batch-norm gamma and beta (running statistics excluded) and PReLU slopes.
/// MACs are multiply-accumulates of convolutions only (FLOPs ~ 2 x MACs).
struct LayerReport {
  std::string name;
  LayerKind kind = LayerKind::kConv;
  Shape4 output;
  std::int64_t params = 0;
  std::int64_t macs = 0;
  std::int64_t receptive_field = 1;
  std::int64_t jump = 1;
};

struct AnalysisReport {
  std::vector<LayerReport> layers;
  std::int64_t total = 0;
};

/// Layers with learnable parameters; total is the parameter count. Output
/// shapes are reported for a 512x1024 input.
AnalysisReport count_params(const NetworkSpec& spec);
/// Convolution layers at the given input size; total is the MAC count.
AnalysisReport count_macs(const NetworkSpec& spec, Size2 input);
/// Receptive field and jump after every main-path layer; total is the final
/// receptive field in input pixels.
AnalysisReport receptive_field(const NetworkSpec& spec);

/// Learnable elements in a store: every tensor except `*.bn.mean` / `*.bn.var`.
std::int64_t count_store_params(const WeightStore& store);

struct BenchReport {
  Size2 resolution;
  int warmup = 0;
  int iterations = 0;
  double mean_ms = 0.0;
  double fps = 0.0;
  std::vector<double> samples_ms;
  /// FNV-1a over the final logits; identical for identical weights and seed.
  std::uint64_t logits_checksum = 0;
};

/// Runs `warmup` untimed and `iterations` timed forward passes on one input
/// of size `input` (batch 1, uniform [0, 1) pixels from seed 0). Only the
/// forward call sits inside the timed region.
BenchReport benchmark(const NetworkSpec& spec, const WeightStore& weights, Size2 input, int warmup,
                      int iterations);

/// Plain-text report: aligned columns for humans, or CSV (header then one row
/// per entry, no quoting).
struct ReportTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void write_text(std::ostream& out) const;
  void write_csv(std::ostream& out) const;
};

ReportTable params_table(const AnalysisReport& report);
ReportTable macs_table(const AnalysisReport& report);
ReportTable receptive_field_table(const AnalysisReport& report);
ReportTable bench_table(const std::vector<BenchReport>& reports);

}  // namespace dabnet
