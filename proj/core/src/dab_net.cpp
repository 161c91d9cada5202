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

#include "dabnet/dab_net.hpp"

#include <unordered_set>

#include "dabnet/errors.hpp"
#include "dabnet/network_plan.hpp"
#include "dabnet/nn_ops.hpp"
#include "dabnet/rng.hpp"

namespace dabnet {
namespace {

Tensor conv_step(const Tensor& x, const WeightStore& weights, const std::string& step, const ConvSpec& spec) {
  const Tensor& kernel = weights.get(step + ".conv.weight");
  std::span<const float> bias;
  if (spec.has_bias) bias = weights.get(step + ".conv.bias").values();
  return conv2d(x, kernel, bias, spec);
}

void bn_prelu_step(Tensor& x, const WeightStore& weights, const std::string& step, float epsilon) {
  batch_norm_prelu_inplace(x, load_bn(weights, step + ".bn", epsilon), load_prelu(weights, step + ".prelu"));
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Tensor dab_module_forward(const Tensor& x, const DabModuleSpec& spec, const WeightStore& weights,
                          const std::string& prefix) {
  spec.validate();
  if (x.shape().c != spec.channels) {
    throw ShapeError("DAB module " + prefix + " expects " + std::to_string(spec.channels) +
                     " channels, got input " + x.shape().to_string());
  }
  const std::int64_t w = spec.channels, neck = spec.neck(), k = DabModuleSpec::kKernel;
  const float eps = spec.bn_epsilon;

  Tensor pre = x;
  bn_prelu_step(pre, weights, prefix + ".pre", eps);
  Tensor reduced = conv_step(pre, weights, prefix + ".reduce", standard_conv(w, neck, k));
  bn_prelu_step(reduced, weights, prefix + ".reduce", eps);

  Tensor local = conv_step(reduced, weights, prefix + ".local_v", depthwise_vertical(neck, k, 1));
  bn_prelu_step(local, weights, prefix + ".local_v", eps);
  local = conv_step(local, weights, prefix + ".local_h", depthwise_horizontal(neck, k, 1));
  bn_prelu_step(local, weights, prefix + ".local_h", eps);

  Tensor context = conv_step(reduced, weights, prefix + ".context_v", depthwise_vertical(neck, k, spec.dilation));
  bn_prelu_step(context, weights, prefix + ".context_v", eps);
  context = conv_step(context, weights, prefix + ".context_h", depthwise_horizontal(neck, k, spec.dilation));
  bn_prelu_step(context, weights, prefix + ".context_h", eps);

  Tensor merged = add(local, context);
  bn_prelu_step(merged, weights, prefix + ".merge", eps);
  const Tensor projected = conv_step(merged, weights, prefix + ".project", pointwise_conv(neck, w));
  return add(projected, x);
}

Tensor downsample_block(const Tensor& x, std::int64_t out_channels, const WeightStore& weights,
                        const std::string& prefix, float bn_epsilon) {
  const Shape4& s = x.shape();
  if (s.h % 2 != 0 || s.w % 2 != 0) {
    throw ShapeError("downsample block " + prefix + " needs even spatial dims, got " + s.to_string());
  }
  Tensor out;
  if (out_channels > s.c) {
    const Tensor conv = conv_step(x, weights, prefix, standard_conv(s.c, out_channels - s.c, 3, 2));
    const Tensor pooled = max_pool_2x2_s2(x);
    out = concat_channels({&conv, &pooled});
  } else {
    out = conv_step(x, weights, prefix, standard_conv(s.c, out_channels, 3, 2));
  }
  bn_prelu_step(out, weights, prefix, bn_epsilon);
  return out;
}

Tensor dabnet_forward(const Tensor& image, const NetworkSpec& spec, const WeightStore& weights,
                      ForwardTrace* trace) {
  spec.validate();
  const Shape4& s = image.shape();
  if (s.c != NetworkSpec::kImageChannels) {
    throw ShapeError("network input must have 3 channels, got " + s.to_string());
  }
  NetworkSpec::check_input(s.h, s.w);
  validate_weights(weights, spec);

  auto record = [&](const std::string& name, const Tensor& t) {
    if (trace != nullptr) trace->emplace_back(name, t.shape());
  };
  const float eps = spec.bn_epsilon;
  const std::int64_t c0 = spec.init_channels;

  Tensor x = conv_step(image, weights, names::stage(0), standard_conv(3, c0, 3, 2));
  bn_prelu_step(x, weights, names::stage(0), eps);
  record(names::stage(0) + ".prelu", x);
  for (int i = 1; i <= 2; ++i) {
    x = conv_step(x, weights, names::stage(i), standard_conv(c0, c0, 3));
    bn_prelu_step(x, weights, names::stage(i), eps);
    record(names::stage(i) + ".prelu", x);
  }

  const Tensor pooled2 = avg_pool_downsample(image, 2);
  x = concat_channels({&x, &pooled2});
  bn_prelu_step(x, weights, names::stage(3), eps);
  record(names::stage(3) + ".prelu", x);

  const Tensor down1 = downsample_block(x, spec.block1_channels(), weights, names::stage(4), eps);
  record(names::stage(4) + ".prelu", down1);
  Tensor y = down1;
  for (std::size_t j = 0; j < spec.block1_dilations.size(); ++j) {
    const std::string prefix = names::module(1, static_cast<int>(j));
    y = dab_module_forward(y, {spec.block1_channels(), spec.block1_dilations[j], eps}, weights, prefix);
    record(prefix + ".residual", y);
  }
  const Tensor pooled4 = avg_pool_downsample(image, 4);
  x = concat_channels({&y, &down1, &pooled4});
  record("block1.concat", x);
  bn_prelu_step(x, weights, names::stage(5), eps);

  const Tensor down2 = downsample_block(x, spec.block2_channels(), weights, names::stage(6), eps);
  record(names::stage(6) + ".prelu", down2);
  y = down2;
  for (std::size_t j = 0; j < spec.block2_dilations.size(); ++j) {
    const std::string prefix = names::module(2, static_cast<int>(j));
    y = dab_module_forward(y, {spec.block2_channels(), spec.block2_dilations[j], eps}, weights, prefix);
    record(prefix + ".residual", y);
  }
  const Tensor pooled8 = avg_pool_downsample(image, 8);
  x = concat_channels({&y, &down2, &pooled8});
  record("block2.concat", x);
  bn_prelu_step(x, weights, names::stage(7), eps);

  const Tensor logits = conv_step(x, weights, names::stage(8), pointwise_conv(x.shape().c, spec.num_classes, true));
  record(names::stage(8) + ".conv", logits);
  Tensor out = bilinear_upsample(logits, NetworkSpec::kOutputStride);
  record("upsample", out);
  return out;
}

LabelMap predict_labels(const Tensor& logits) {
  const Shape4& s = logits.shape();
  LabelMap out(s.n, s.h, s.w);
  const std::int64_t plane = s.h * s.w;
  for (std::int64_t n = 0; n < s.n; ++n) {
    std::vector<float> best(static_cast<std::size_t>(plane));
    if (s.c > 0) std::copy_n(logits.plane(n, 0), plane, best.begin());
    std::int32_t* labels = out.labels.data() + n * plane;
    for (std::int64_t c = 1; c < s.c; ++c) {
      const float* p = logits.plane(n, c);
      for (std::int64_t i = 0; i < plane; ++i) {
        if (p[i] > best[static_cast<std::size_t>(i)]) {
          best[static_cast<std::size_t>(i)] = p[i];
          labels[i] = static_cast<std::int32_t>(c);
        }
      }
    }
  }
  return out;
}

WeightStore init_plan_weights(const NetworkPlan& plan, std::uint64_t seed, float conv_scale) {
  Rng rng(seed);
  WeightStore store;
  for (const WeightEntry& e : plan.weights) {
    Tensor t(e.shape);
    if (ends_with(e.name, ".bn.gamma") || ends_with(e.name, ".bn.var")) {
      t = Tensor::filled(e.shape, 1.0f);
    } else if (ends_with(e.name, ".bn.beta") || ends_with(e.name, ".bn.mean")) {
      // zeros
    } else if (ends_with(e.name, ".prelu.slope")) {
      t = Tensor::filled(e.shape, 0.25f);
    } else if (conv_scale != 0.0f) {
      fill_uniform(t, rng, -conv_scale, conv_scale);
    }
    store.insert(e.name, std::move(t));
  }
  return store;
}

WeightStore init_random_weights(const NetworkSpec& spec, std::uint64_t seed) {
  const NetworkPlan plan = build_plan(spec, {NetworkSpec::kOutputStride, NetworkSpec::kOutputStride});
  return init_plan_weights(plan, seed, 0.1f);
}

void validate_weights(const WeightStore& weights, const NetworkSpec& spec) {
  const NetworkPlan plan = build_plan(spec, {NetworkSpec::kOutputStride, NetworkSpec::kOutputStride});
  std::unordered_set<std::string> required;
  for (const WeightEntry& e : plan.weights) {
    const Tensor& t = weights.get(e.name);
    if (t.shape() != e.shape) {
      throw WeightStoreError("weight entry '" + e.name + "' has shape " + t.shape().to_string() +
                             ", expected " + e.shape.to_string());
    }
    required.insert(e.name);
  }
  for (const auto& [name, t] : weights) {
    if (!required.contains(name)) throw WeightStoreError("unexpected weight entry '" + name + "'");
  }
}

}  // namespace dabnet
