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

#include <benchmark/benchmark.h>

#include "dabnet/analysis.hpp"
#include "dabnet/dab_net.hpp"
#include "dabnet/memory.hpp"
#include "dabnet/network_plan.hpp"
#include "dabnet/rng.hpp"

namespace dabnet {
namespace {

void BM_DabModule(benchmark::State& state) {
  const DabModuleSpec spec{128, state.range(0)};
  const Size2 hw{64, 128};
  const WeightStore w = init_plan_weights(build_module_plan(spec, hw, "m"), 1, 0.1f);
  Rng rng(1);
  Tensor x({1, 128, hw.h, hw.w});
  fill_uniform(x, rng, -1.0f, 1.0f);
  for (auto _ : state) benchmark::DoNotOptimize(dab_module_forward(x, spec, w, "m"));
}
BENCHMARK(BM_DabModule)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  keep_freed_memory();
  const NetworkSpec spec;
  const Size2 hw{state.range(0), state.range(1)};
  const WeightStore w = init_random_weights(spec, 0);
  Rng rng(0);
  Tensor image({1, 3, hw.h, hw.w});
  fill_uniform(image, rng, 0.0f, 1.0f);
  for (auto _ : state) benchmark::DoNotOptimize(dabnet_forward(image, spec, w));
  state.counters["FPS"] = benchmark::Counter(1.0, benchmark::Counter::kIsIterationInvariantRate);
  state.counters["GMAC"] = static_cast<double>(count_macs(spec, hw).total) * 1e-9;
}
BENCHMARK(BM_Forward)->Args({256, 512})->Args({512, 1024})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dabnet

BENCHMARK_MAIN();
