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

#include <cstdint>

#include <benchmark/benchmark.h>

#include "dabnet/nn_ops.hpp"
#include "dabnet/rng.hpp"

namespace dabnet {
namespace {

Tensor random(Shape4 s, std::uint64_t seed) {
  Rng rng(seed);
  Tensor t(s);
  fill_uniform(t, rng, -1.0f, 1.0f);
  return t;
}

void run_conv(benchmark::State& state, const ConvSpec& spec, Size2 hw) {
  const Tensor x = random({1, spec.in_channels, hw.h, hw.w}, 1);
  const Tensor w = random(spec.weight_shape(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d(x, w, {}, spec));
  state.counters["MAC/s"] =
      benchmark::Counter(static_cast<double>(spec.macs(hw)), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_Conv3x3(benchmark::State& state) {
  const auto c = state.range(0);
  run_conv(state, standard_conv(c, c / 2, 3), {64, 128});
}
BENCHMARK(BM_Conv3x3)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Pointwise(benchmark::State& state) {
  const auto c = state.range(0);
  run_conv(state, pointwise_conv(c / 2, c), {64, 128});
}
BENCHMARK(BM_Pointwise)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DepthwiseVertical(benchmark::State& state) {
  run_conv(state, depthwise_vertical(64, 3, state.range(0)), {64, 128});
}
BENCHMARK(BM_DepthwiseVertical)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_DepthwiseHorizontal(benchmark::State& state) {
  run_conv(state, depthwise_horizontal(64, 3, state.range(0)), {64, 128});
}
BENCHMARK(BM_DepthwiseHorizontal)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_BatchNormPrelu(benchmark::State& state) {
  Tensor x = random({1, 128, 64, 128}, 3);
  const BnParams bn = BnParams::identity(128);
  const PreluParams act = PreluParams::constant(128, 0.25f);
  for (auto _ : state) {
    batch_norm_prelu_inplace(x, bn, act);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_BatchNormPrelu)->Unit(benchmark::kMicrosecond);

void BM_Bilinear8x(benchmark::State& state) {
  const Tensor x = random({1, 19, 64, 128}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(bilinear_upsample(x, 8));
}
BENCHMARK(BM_Bilinear8x)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dabnet
