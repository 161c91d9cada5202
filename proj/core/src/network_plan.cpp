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

#include "dabnet/network_plan.hpp"

#include <algorithm>
#include <initializer_list>

#include "dabnet/errors.hpp"

namespace dabnet {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kBatchNorm: return "batchnorm";
    case LayerKind::kPrelu: return "prelu";
    case LayerKind::kMaxPool: return "maxpool";
    case LayerKind::kAvgPool: return "avgpool";
    case LayerKind::kConcat: return "concat";
    case LayerKind::kAdd: return "add";
    case LayerKind::kUpsample: return "upsample";
  }
  return "?";
}

namespace names {

std::string stage(int index) { return "stage." + std::to_string(index); }

std::string module(int block, int index) {
  return "block" + std::to_string(block) + ".mod" + std::to_string(index);
}

}  // namespace names

const LayerRecord& NetworkPlan::layer(std::string_view name) const {
  for (const auto& l : layers) {
    if (l.name == name) return l;
  }
  throw ArgumentError("no layer named '" + std::string(name) + "' in plan");
}

std::int64_t NetworkPlan::total_params() const {
  std::int64_t total = 0;
  for (const auto& l : layers) total += l.params;
  return total;
}

std::int64_t NetworkPlan::total_macs() const {
  std::int64_t total = 0;
  for (const auto& l : layers) total += l.macs;
  return total;
}

namespace {

struct Cursor {
  Shape4 shape;
  std::int64_t rf_h = 1;
  std::int64_t rf_w = 1;
  std::int64_t jump = 1;
};

Shape4 vector_shape(std::int64_t c) { return {c, 1, 1, 1}; }

class PlanBuilder {
 public:
  explicit PlanBuilder(NetworkPlan& plan) : plan_(plan) {}

  Cursor conv(const std::string& step, const Cursor& in, const ConvSpec& spec) {
    spec.validate();
    if (in.shape.c != spec.in_channels) {
      throw ShapeError("plan: " + step + " expects " + std::to_string(spec.in_channels) +
                       " channels, got " + std::to_string(in.shape.c));
    }
    if (spec.stride.h != spec.stride.w) throw ArgumentError("plan: non-square stride at " + step);
    const Size2 out = spec.output_size({in.shape.h, in.shape.w});
    Cursor c = in;
    c.shape = {in.shape.n, spec.out_channels, out.h, out.w};
    c.rf_h += (spec.kernel.h - 1) * spec.dilation.h * in.jump;
    c.rf_w += (spec.kernel.w - 1) * spec.dilation.w * in.jump;
    c.jump = in.jump * spec.stride.h;

    LayerRecord& r = push(step + ".conv", LayerKind::kConv, c);
    r.conv = spec;
    r.params = spec.param_count();
    r.macs = spec.macs({in.shape.h, in.shape.w});
    plan_.weights.push_back({step + ".conv.weight", spec.weight_shape(), true});
    if (spec.has_bias) plan_.weights.push_back({step + ".conv.bias", vector_shape(spec.out_channels), true});
    return c;
  }

  Cursor bn_prelu(const std::string& step, const Cursor& in) {
    const std::int64_t ch = in.shape.c;
    push(step + ".bn", LayerKind::kBatchNorm, in).params = 2 * ch;
    for (const char* t : {".bn.gamma", ".bn.beta"}) plan_.weights.push_back({step + t, vector_shape(ch), true});
    for (const char* t : {".bn.mean", ".bn.var"}) plan_.weights.push_back({step + t, vector_shape(ch), false});
    push(step + ".prelu", LayerKind::kPrelu, in).params = ch;
    plan_.weights.push_back({step + ".prelu.slope", vector_shape(ch), true});
    return in;
  }

  Cursor max_pool(const std::string& name, const Cursor& in) {
    Cursor c = in;
    c.shape.h = in.shape.h / 2;
    c.shape.w = in.shape.w / 2;
    c.rf_h += in.jump;
    c.rf_w += in.jump;
    c.jump = in.jump * 2;
    push(name, LayerKind::kMaxPool, c);
    return c;
  }

  Cursor avg_pool(const std::string& name, const Cursor& in, std::int64_t factor) {
    SideBranch side(*this);
    Cursor c = in;
    c.shape.h = in.shape.h / factor;
    c.shape.w = in.shape.w / factor;
    c.rf_h += (factor - 1) * in.jump;
    c.rf_w += (factor - 1) * in.jump;
    c.jump = in.jump * factor;
    push(name, LayerKind::kAvgPool, c);
    return c;
  }

  Cursor concat(const std::string& name, std::initializer_list<Cursor> parts) {
    Cursor c = *parts.begin();
    c.shape.c = 0;
    for (const Cursor& p : parts) {
      if (p.shape.h != c.shape.h || p.shape.w != c.shape.w) {
        throw ShapeError("plan: spatial mismatch at " + name);
      }
      c.shape.c += p.shape.c;
      merge_rf(c, p);
    }
    push(name, LayerKind::kConcat, c);
    return c;
  }

  Cursor add(const std::string& name, const Cursor& a, const Cursor& b) {
    if (a.shape != b.shape) throw ShapeError("plan: shape mismatch at " + name);
    Cursor c = a;
    merge_rf(c, b);
    push(name, LayerKind::kAdd, c);
    return c;
  }

  Cursor upsample(const std::string& name, const Cursor& in, std::int64_t factor) {
    Cursor c = in;
    c.shape.h *= factor;
    c.shape.w *= factor;
    push(name, LayerKind::kUpsample, c);
    return c;
  }

  Cursor dab_module(const std::string& prefix, const Cursor& x, const DabModuleSpec& spec) {
    spec.validate();
    const std::int64_t w = spec.channels, neck = spec.neck(), k = DabModuleSpec::kKernel;
    const Cursor pre = bn_prelu(prefix + ".pre", x);
    Cursor reduced = conv(prefix + ".reduce", pre, standard_conv(w, neck, k));
    reduced = bn_prelu(prefix + ".reduce", reduced);

    Cursor local;
    {
      SideBranch side(*this);
      local = conv(prefix + ".local_v", reduced, depthwise_vertical(neck, k, 1));
      local = bn_prelu(prefix + ".local_v", local);
      local = conv(prefix + ".local_h", local, depthwise_horizontal(neck, k, 1));
      local = bn_prelu(prefix + ".local_h", local);
    }

    Cursor context = conv(prefix + ".context_v", reduced, depthwise_vertical(neck, k, spec.dilation));
    context = bn_prelu(prefix + ".context_v", context);
    context = conv(prefix + ".context_h", context, depthwise_horizontal(neck, k, spec.dilation));
    context = bn_prelu(prefix + ".context_h", context);

    Cursor merged = add(prefix + ".sum", local, context);
    merged = bn_prelu(prefix + ".merge", merged);
    const Cursor projected = conv(prefix + ".project", merged, pointwise_conv(neck, w));
    return add(prefix + ".residual", projected, x);
  }

  Cursor downsample(const std::string& prefix, const Cursor& x, std::int64_t out_channels) {
    const std::int64_t in = x.shape.c;
    if (out_channels > in) {
      const Cursor c = conv(prefix, x, standard_conv(in, out_channels - in, 3, 2));
      Cursor p;
      {
        SideBranch side(*this);
        p = max_pool(prefix + ".pool", x);
      }
      return bn_prelu(prefix, concat(prefix + ".concat", {c, p}));
    }
    return bn_prelu(prefix, conv(prefix, x, standard_conv(in, out_channels, 3, 2)));
  }

 private:
  LayerRecord& push(std::string name, LayerKind kind, const Cursor& c) {
    LayerRecord r;
    r.name = std::move(name);
    r.kind = kind;
    r.output = c.shape;
    r.rf_h = c.rf_h;
    r.rf_w = c.rf_w;
    r.jump = c.jump;
    r.main_path = !side_;
    plan_.layers.push_back(std::move(r));
    return plan_.layers.back();
  }

  static void merge_rf(Cursor& into, const Cursor& other) {
    into.rf_h = std::max(into.rf_h, other.rf_h);
    into.rf_w = std::max(into.rf_w, other.rf_w);
    into.jump = std::max(into.jump, other.jump);
  }

  NetworkPlan& plan_;
  bool side_ = false;

 public:
  // Marks layers added while alive as off the main receptive-field path.
  class SideBranch {
   public:
    explicit SideBranch(PlanBuilder& b) : b_(b), saved_(b.side_) { b_.side_ = true; }
    ~SideBranch() { b_.side_ = saved_; }
    SideBranch(const SideBranch&) = delete;
    SideBranch& operator=(const SideBranch&) = delete;

   private:
    PlanBuilder& b_;
    bool saved_;
  };
};

}  // namespace

NetworkPlan build_plan(const NetworkSpec& spec, Size2 input) {
  spec.validate();
  NetworkSpec::check_input(input.h, input.w);
  NetworkPlan plan;
  plan.input = input;
  PlanBuilder b(plan);

  const std::int64_t c0 = spec.init_channels;
  const Cursor image{{1, NetworkSpec::kImageChannels, input.h, input.w}};

  Cursor x = b.bn_prelu(names::stage(0), b.conv(names::stage(0), image, standard_conv(3, c0, 3, 2)));
  x = b.bn_prelu(names::stage(1), b.conv(names::stage(1), x, standard_conv(c0, c0, 3)));
  x = b.bn_prelu(names::stage(2), b.conv(names::stage(2), x, standard_conv(c0, c0, 3)));

  const Cursor pooled2 = b.avg_pool("image.pool2", image, 2);
  x = b.bn_prelu(names::stage(3), b.concat(names::stage(3) + ".concat", {x, pooled2}));

  const Cursor down1 = b.downsample(names::stage(4), x, spec.block1_channels());
  Cursor y = down1;
  for (std::size_t j = 0; j < spec.block1_dilations.size(); ++j) {
    y = b.dab_module(names::module(1, static_cast<int>(j)), y,
                     {spec.block1_channels(), spec.block1_dilations[j], spec.bn_epsilon});
  }
  const Cursor pooled4 = b.avg_pool("image.pool4", image, 4);
  x = b.bn_prelu(names::stage(5), b.concat("block1.concat", {y, down1, pooled4}));

  const Cursor down2 = b.downsample(names::stage(6), x, spec.block2_channels());
  y = down2;
  for (std::size_t j = 0; j < spec.block2_dilations.size(); ++j) {
    y = b.dab_module(names::module(2, static_cast<int>(j)), y,
                     {spec.block2_channels(), spec.block2_dilations[j], spec.bn_epsilon});
  }
  const Cursor pooled8 = b.avg_pool("image.pool8", image, 8);
  x = b.bn_prelu(names::stage(7), b.concat("block2.concat", {y, down2, pooled8}));

  x = b.conv(names::stage(8), x, pointwise_conv(x.shape.c, spec.num_classes, true));
  b.upsample("upsample", x, NetworkSpec::kOutputStride);
  return plan;
}

NetworkPlan build_module_plan(const DabModuleSpec& spec, Size2 input, const std::string& prefix) {
  NetworkPlan plan;
  plan.input = input;
  PlanBuilder b(plan);
  b.dab_module(prefix, Cursor{{1, spec.channels, input.h, input.w}}, spec);
  return plan;
}

}  // namespace dabnet
