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
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "dabnet/dab_net.hpp"
#include "dabnet/errors.hpp"
#include "dabnet/network_plan.hpp"
#include "dabnet/oracle.hpp"
#include "dabnet/rng.hpp"

namespace dabnet {
namespace {

// The module rebuilt from oracle kernels, step by step, to check wiring.
Tensor reference_module(const Tensor& x, const DabModuleSpec& spec, const WeightStore& w, const std::string& p) {
  auto bn_act = [&](const Tensor& t, const std::string& step) {
    return oracle::prelu(oracle::batch_norm(t, load_bn(w, p + step + ".bn", spec.bn_epsilon)),
                         load_prelu(w, p + step + ".prelu"));
  };
  auto conv = [&](const Tensor& t, const std::string& step, const ConvSpec& cs) {
    return oracle::conv2d(t, w.get(p + step + ".conv.weight"), {}, cs);
  };
  const std::int64_t c = spec.channels, n = spec.neck(), d = spec.dilation;
  const Tensor reduced = bn_act(conv(bn_act(x, ".pre"), ".reduce", standard_conv(c, n, 3)), ".reduce");
  Tensor local = bn_act(conv(reduced, ".local_v", depthwise_vertical(n, 3, 1)), ".local_v");
  local = bn_act(conv(local, ".local_h", depthwise_horizontal(n, 3, 1)), ".local_h");
  Tensor context = bn_act(conv(reduced, ".context_v", depthwise_vertical(n, 3, d)), ".context_v");
  context = bn_act(conv(context, ".context_h", depthwise_horizontal(n, 3, d)), ".context_h");
  const Tensor merged = bn_act(add(local, context), ".merge");
  return add(conv(merged, ".project", pointwise_conv(n, c)), x);
}

Tensor stack(const Tensor& a, const Tensor& b) {
  Shape4 s = a.shape();
  s.n += b.shape().n;
  std::vector<float> v(a.values().begin(), a.values().end());
  v.insert(v.end(), b.values().begin(), b.values().end());
  return Tensor(s, std::move(v));
}

Tensor image_at(const Tensor& t, std::int64_t n) {
  Shape4 s = t.shape();
  s.n = 1;
  const auto first = t.values().begin() + static_cast<std::ptrdiff_t>(t.offset(n, 0, 0, 0));
  return Tensor(s, std::vector<float>(first, first + static_cast<std::ptrdiff_t>(s.count())));
}

TEST(DabModuleTest, MatchesOracleComposition) {
  Rng rng(21);
  for (std::int64_t d : {1, 2, 4, 8}) {
    const DabModuleSpec spec{8, d};
    const NetworkPlan plan = build_module_plan(spec, {12, 10}, "m");
    const WeightStore w = init_plan_weights(plan, rng.next_u64(), 0.3f);
    Tensor x({2, 8, 12, 10});
    fill_uniform(x, rng, -1.0f, 1.0f);
    const auto r = oracle::compare(dab_module_forward(x, spec, w, "m"), reference_module(x, spec, w, "m"),
                                   oracle::kConvTolerance);
    EXPECT_TRUE(r.ok) << "dilation " << d << ": " << r.detail;
  }
}

TEST(DabModuleTest, ZeroConvsGiveIdentity) {
  Rng rng(5);
  const DabModuleSpec spec{16, 4};
  const WeightStore w = init_plan_weights(build_module_plan(spec, {8, 8}, "m"), 0, 0.0f);
  Tensor x({1, 16, 8, 8});
  fill_uniform(x, rng, -3.0f, 3.0f);
  EXPECT_EQ(dab_module_forward(x, spec, w, "m"), x);
}

TEST(DabModuleTest, RejectsWrongWidth) {
  const DabModuleSpec spec{16, 2};
  const WeightStore w = init_plan_weights(build_module_plan(spec, {8, 8}, "m"), 0, 0.1f);
  EXPECT_THROW(dab_module_forward(Tensor({1, 8, 8, 8}), spec, w, "m"), ShapeError);
  EXPECT_THROW((DabModuleSpec{7, 1}.validate()), ArgumentError);
  EXPECT_THROW((DabModuleSpec{8, 0}.validate()), ArgumentError);
}

TEST(DabNetTest, StageShapesAtFullResolution) {
  const NetworkPlan plan = build_plan(NetworkSpec{}, {512, 1024});
  EXPECT_EQ(plan.layer("stage.2.prelu").output, (Shape4{1, 32, 256, 512}));
  EXPECT_EQ(plan.layer("stage.4.prelu").output, (Shape4{1, 64, 128, 256}));
  EXPECT_EQ(plan.layer("stage.6.prelu").output, (Shape4{1, 128, 64, 128}));
  EXPECT_EQ(plan.layer("stage.8.conv").output, (Shape4{1, 19, 64, 128}));
  EXPECT_EQ(plan.layer("upsample").output, (Shape4{1, 19, 512, 1024}));
  EXPECT_EQ(plan.layer("stage.3.prelu").output.c, 35);
  EXPECT_EQ(plan.layer("block1.concat").output.c, 131);
  EXPECT_EQ(plan.layer("block2.concat").output.c, 259);
  EXPECT_THROW(plan.layer("nope"), ArgumentError);
}

TEST(DabNetTest, ForwardTraceMatchesPlan) {
  const NetworkSpec spec;
  const WeightStore w = init_random_weights(spec, 3);
  Rng rng(3);
  Tensor image({1, 3, 32, 48});
  fill_uniform(image, rng, 0.0f, 1.0f);
  ForwardTrace trace;
  const Tensor logits = dabnet_forward(image, spec, w, &trace);
  EXPECT_EQ(logits.shape(), (Shape4{1, 19, 32, 48}));
  const NetworkPlan plan = build_plan(spec, {32, 48});
  ASSERT_GE(trace.size(), 10u);
  for (const auto& [name, shape] : trace) EXPECT_EQ(plan.layer(name).output, shape) << name;
  EXPECT_EQ(dabnet_forward(image, spec, w), logits);
}

TEST(DabNetTest, BatchesAreIndependent) {
  const NetworkSpec spec;
  const WeightStore w = init_random_weights(spec, 4);
  Rng rng(4);
  Tensor a({1, 3, 16, 16}), b({1, 3, 16, 16});
  fill_uniform(a, rng, 0.0f, 1.0f);
  fill_uniform(b, rng, 0.0f, 1.0f);
  const Tensor both = dabnet_forward(stack(a, b), spec, w);
  EXPECT_EQ(image_at(both, 0), dabnet_forward(a, spec, w));
  EXPECT_EQ(image_at(both, 1), dabnet_forward(b, spec, w));
}

TEST(DabNetTest, InputRules) {
  const NetworkSpec spec;
  const WeightStore w = init_random_weights(spec, 0);
  EXPECT_THROW(dabnet_forward(Tensor({1, 3, 20, 16}), spec, w), InputShapeError);
  EXPECT_THROW(dabnet_forward(Tensor({1, 1, 16, 16}), spec, w), ShapeError);
  EXPECT_THROW(NetworkSpec::check_input(0, 8), InputShapeError);
}

TEST(DabNetTest, WeightValidationNamesTheProblem) {
  const NetworkSpec spec;
  WeightStore w = init_random_weights(spec, 0);
  EXPECT_NO_THROW(validate_weights(w, spec));
  WeightStore extra = w;
  extra.insert("stray", Tensor({1, 1, 1, 1}));
  try {
    validate_weights(extra, spec);
    FAIL() << "extra entry accepted";
  } catch (const WeightStoreError& e) {
    EXPECT_NE(std::string(e.what()).find("stray"), std::string::npos);
  }
  NetworkSpec other = spec;
  other.num_classes = 7;
  EXPECT_THROW(validate_weights(w, other), WeightStoreError);
}

TEST(DabNetTest, RandomWeightsAreSeeded) {
  const NetworkSpec spec;
  EXPECT_EQ(init_random_weights(spec, 1), init_random_weights(spec, 1));
  EXPECT_NE(init_random_weights(spec, 1), init_random_weights(spec, 2));
  const WeightStore w = init_random_weights(spec, 1);
  EXPECT_EQ(w.get("stage.0.bn.gamma").values()[0], 1.0f);
  EXPECT_EQ(w.get("stage.0.prelu.slope").values()[0], 0.25f);
  for (float v : w.get("stage.0.conv.weight").values()) {
    EXPECT_GE(v, -0.1f);
    EXPECT_LT(v, 0.1f);
  }
}

TEST(DabNetTest, PredictLabelsTiesGoLow) {
  // Channel planes: {1, 5, 2}, {1, 5, 7}, {0, 1, 7}; every pixel is a tie.
  Tensor logits({1, 3, 1, 3}, {1, 5, 2, 1, 5, 7, 0, 1, 7});
  const LabelMap m = predict_labels(logits);
  EXPECT_EQ(m.labels, (std::vector<std::int32_t>{0, 0, 1}));
}

TEST(NetworkSpecTest, ConfigRoundTrip) {
  NetworkSpec spec;
  spec.num_classes = 7;
  spec.block1_dilations = {1, 3};
  spec.block2_dilations = {2, 5, 9};
  EXPECT_EQ(NetworkSpec::parse_config(spec.to_config()), spec);
  const NetworkSpec parsed = NetworkSpec::parse_config("# comment\n\nclasses = 11\nblock2=1,2\n");
  EXPECT_EQ(parsed.num_classes, 11);
  EXPECT_EQ(parsed.block2_dilations, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(parsed.block1_dilations, NetworkSpec{}.block1_dilations);
  EXPECT_THROW(NetworkSpec::parse_config("colour=red\n"), ArgumentError);
  EXPECT_THROW(NetworkSpec::parse_config("classes\n"), ArgumentError);
}

TEST(NetworkSpecTest, Parsers) {
  EXPECT_EQ(parse_int_list("4,4,8"), (std::vector<std::int64_t>{4, 4, 8}));
  EXPECT_THROW(parse_int_list(""), ArgumentError);
  EXPECT_THROW(parse_int_list("4,,8"), ArgumentError);
  EXPECT_EQ(parse_size("512x1024"), (Size2{512, 1024}));
  EXPECT_THROW(parse_size("512"), ArgumentError);
}

}  // namespace
}  // namespace dabnet
