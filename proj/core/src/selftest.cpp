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

#include "dabnet/selftest.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "dabnet/analysis.hpp"
#include "dabnet/dab_net.hpp"
#include "dabnet/errors.hpp"
#include "dabnet/metrics.hpp"
#include "dabnet/model_io.hpp"
#include "dabnet/netpbm.hpp"
#include "dabnet/network_plan.hpp"
#include "dabnet/oracle.hpp"

namespace dabnet::selftest {
namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  explicit Recorder(std::string name) : start_(Clock::now()) { result_.name = std::move(name); }

  // body returns an empty string on success, otherwise a description.
  template <class Body>
  void run(std::int64_t index, Body&& body) {
    ++result_.cases;
    std::string why;
    try {
      why = body();
    } catch (const std::exception& e) {
      why = std::string("threw: ") + e.what();
    }
    if (why.empty()) return;
    if (result_.failures++ == 0) result_.first_failure = "case " + std::to_string(index) + ": " + why;
  }

  CheckResult finish() {
    result_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return result_;
  }

 private:
  CheckResult result_;
  Clock::time_point start_;
};

std::string compare(const Tensor& actual, const Tensor& expected, double rel,
                    double floor = oracle::kAbsoluteFloor) {
  const oracle::Comparison c = oracle::compare(actual, expected, rel, floor);
  if (c.ok) return {};
  std::ostringstream os;
  os << c.detail << " (max error " << c.max_error << ", bound " << c.bound << ")";
  return os.str();
}

std::string exact(const Tensor& actual, const Tensor& expected) { return compare(actual, expected, 0.0, 0.0); }

Tensor random_tensor(Shape4 shape, Rng& rng, float lo = -1.0f, float hi = 1.0f) {
  Tensor t(shape);
  fill_uniform(t, rng, lo, hi);
  return t;
}

Tensor random_integers(Shape4 shape, Rng& rng, std::int64_t lo, std::int64_t hi) {
  Tensor t(shape);
  for (float& v : t.values()) v = static_cast<float>(rng.uniform_int(lo, hi));
  return t;
}

std::vector<float> random_vector(std::int64_t n, Rng& rng, float lo, float hi) {
  std::vector<float> v(static_cast<std::size_t>(n));
  for (float& x : v) x = rng.uniform(lo, hi);
  return v;
}

constexpr std::array<std::int64_t, 5> kDilations{1, 2, 4, 8, 16};

// Padding along one axis such that an extent in [1, 16] produces output.
std::int64_t pick_padding(Rng& rng, std::int64_t span) {
  const std::int64_t same = (span - 1) / 2;
  std::int64_t pad = rng.uniform_int(0, same + 1);
  if (span - 2 * pad > 16) pad = same;
  return pad;
}

std::int64_t pick_extent(Rng& rng, std::int64_t span, std::int64_t pad) {
  return rng.uniform_int(std::max<std::int64_t>(1, span - 2 * pad), 16);
}

DabModuleSpec random_module(Rng& rng) {
  DabModuleSpec m;
  m.channels = 2 * rng.uniform_int(1, 8);
  m.dilation = kDilations[static_cast<std::size_t>(rng.uniform_int(0, 4))];
  return m;
}

NetworkSpec random_network(Rng& rng) {
  NetworkSpec s;
  s.num_classes = rng.uniform_int(1, 20);
  s.init_channels = std::array<std::int64_t, 4>{4, 8, 16, 32}[static_cast<std::size_t>(rng.uniform_int(0, 3))];
  auto dilations = [&](std::int64_t max_len) {
    std::vector<std::int64_t> d(static_cast<std::size_t>(rng.uniform_int(1, max_len)));
    for (auto& v : d) v = kDilations[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    return d;
  };
  s.block1_dilations = dilations(3);
  s.block2_dilations = dilations(6);
  return s;
}

LabelMap random_labels(Rng& rng, std::int64_t n, std::int64_t h, std::int64_t w, std::int32_t classes) {
  LabelMap m(n, h, w);
  for (auto& v : m.labels) v = static_cast<std::int32_t>(rng.uniform_int(0, classes - 1));
  return m;
}

}  // namespace

ConvCase random_conv_case(Rng& rng, std::int64_t index) {
  const std::int64_t d = kDilations[static_cast<std::size_t>(index % 5)];
  const std::int64_t kind = (index / 5) % 4;
  const std::int64_t grouping = (index / 20) % 3;

  ConvCase c;
  ConvSpec& s = c.spec;
  if (grouping == 1) {
    s.in_channels = s.out_channels = s.groups = rng.uniform_int(1, 8);
  } else if (grouping == 2) {
    s.groups = rng.uniform_int(2, 4);
    s.in_channels = s.groups * rng.uniform_int(1, 8 / s.groups);
    s.out_channels = s.groups * rng.uniform_int(1, 8 / s.groups);
  } else {
    s.in_channels = rng.uniform_int(1, 8);
    s.out_channels = rng.uniform_int(1, 8);
  }
  static constexpr std::array<Size2, 4> kKernels{Size2{1, 1}, Size2{3, 3}, Size2{3, 1}, Size2{1, 3}};
  s.kernel = kKernels[static_cast<std::size_t>(kind)];
  s.dilation = {d, d};
  s.stride = {rng.uniform_int(1, 2), rng.uniform_int(1, 2)};
  const std::int64_t span_h = d * (s.kernel.h - 1) + 1, span_w = d * (s.kernel.w - 1) + 1;
  s.padding = {pick_padding(rng, span_h), pick_padding(rng, span_w)};
  s.has_bias = rng.uniform_int(0, 1) == 1;
  c.input = {rng.uniform_int(1, 2), s.in_channels, pick_extent(rng, span_h, s.padding.h),
             pick_extent(rng, span_w, s.padding.w)};
  return c;
}

CheckResult check_conv2d(std::uint64_t seed, int cases) {
  Recorder rec("conv2d vs oracle");
  Rng rng(seed ^ 0xC0);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const ConvCase c = random_conv_case(rng, i);
      const Tensor x = random_tensor(c.input, rng);
      const Tensor w = random_tensor(c.spec.weight_shape(), rng);
      const std::vector<float> b = c.spec.has_bias ? random_vector(c.spec.out_channels, rng, -1, 1) : std::vector<float>{};
      const std::string why = compare(conv2d(x, w, b, c.spec), oracle::conv2d(x, w, b, c.spec), oracle::kConvTolerance);
      return why.empty() ? why : c.spec.describe() + " on " + c.input.to_string() + ": " + why;
    });
  }
  return rec.finish();
}

CheckResult check_batch_norm(std::uint64_t seed, int cases) {
  Recorder rec("batch_norm vs oracle");
  Rng rng(seed ^ 0xB0);
  static constexpr std::array<float, 3> kEps{1e-5f, 1e-3f, 0.1f};
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const std::int64_t ch = rng.uniform_int(1, 8);
      const Tensor x = random_tensor({rng.uniform_int(1, 2), ch, rng.uniform_int(1, 16), rng.uniform_int(1, 16)}, rng, -3, 3);
      BnParams p;
      p.gamma = random_vector(ch, rng, -2, 2);
      p.beta = random_vector(ch, rng, -1, 1);
      p.running_mean = random_vector(ch, rng, -1, 1);
      p.running_var = random_vector(ch, rng, 0, 2);
      p.epsilon = kEps[static_cast<std::size_t>(i % 3)];
      const PreluParams a{random_vector(ch, rng, 0, 1)};
      const Tensor expected = oracle::batch_norm(x, p);
      std::string why = compare(batch_norm_infer(x, p), expected, oracle::kPointwiseTolerance);
      if (!why.empty()) return "batch_norm_infer " + why;
      Tensor fused = x;
      batch_norm_prelu_inplace(fused, p, a);
      why = compare(fused, oracle::prelu(expected, a), oracle::kPointwiseTolerance);
      return why.empty() ? why : "fused BN+PReLU " + why;
    });
  }
  return rec.finish();
}

CheckResult check_prelu(std::uint64_t seed, int cases) {
  Recorder rec("prelu vs oracle");
  Rng rng(seed ^ 0xA0);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const std::int64_t ch = rng.uniform_int(1, 8);
      const Tensor x = random_tensor({rng.uniform_int(1, 2), ch, rng.uniform_int(1, 16), rng.uniform_int(1, 16)}, rng, -2, 2);
      const PreluParams a{random_vector(ch, rng, -1, 1)};
      return compare(prelu(x, a), oracle::prelu(x, a), oracle::kPointwiseTolerance);
    });
  }
  return rec.finish();
}

CheckResult check_max_pool(std::uint64_t seed, int cases) {
  Recorder rec("max_pool vs oracle");
  Rng rng(seed ^ 0x90);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const Tensor x = random_tensor({rng.uniform_int(1, 2), rng.uniform_int(1, 8), rng.uniform_int(2, 16), rng.uniform_int(2, 16)}, rng);
      return exact(max_pool_2x2_s2(x), oracle::max_pool_2x2_s2(x));
    });
  }
  return rec.finish();
}

CheckResult check_avg_pool(std::uint64_t seed, int cases) {
  Recorder rec("avg_pool vs oracle");
  Rng rng(seed ^ 0x80);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const std::int64_t f = std::int64_t{1} << (i % 4);
      const Tensor x = random_tensor({rng.uniform_int(1, 2), rng.uniform_int(1, 8), f * rng.uniform_int(1, 16 / f),
                                      f * rng.uniform_int(1, 16 / f)},
                                     rng);
      return compare(avg_pool_downsample(x, f), oracle::avg_pool(x, f), oracle::kPointwiseTolerance);
    });
  }
  return rec.finish();
}

CheckResult check_bilinear(std::uint64_t seed, int cases) {
  Recorder rec("bilinear vs oracle");
  Rng rng(seed ^ 0x70);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const std::int64_t f = 1 + i % 8;
      const Tensor x = random_tensor({rng.uniform_int(1, 2), rng.uniform_int(1, 8), rng.uniform_int(1, 16), rng.uniform_int(1, 16)}, rng);
      return compare(bilinear_upsample(x, f), oracle::bilinear_upsample(x, f), oracle::kConvTolerance);
    });
  }
  return rec.finish();
}

CheckResult check_conv_shape_law(std::uint64_t seed, int cases) {
  Recorder rec("conv2d output shape law");
  Rng rng(seed ^ 0x60);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const ConvCase c = random_conv_case(rng, i);
      const ConvSpec& s = c.spec;
      const Tensor x(c.input);
      const std::vector<float> b(static_cast<std::size_t>(s.has_bias ? s.out_channels : 0));
      const Shape4 got = conv2d(x, Tensor(s.weight_shape()), b, s).shape();
      const std::int64_t ho = (c.input.h + 2 * s.padding.h - s.dilation.h * (s.kernel.h - 1) - 1) / s.stride.h + 1;
      const std::int64_t wo = (c.input.w + 2 * s.padding.w - s.dilation.w * (s.kernel.w - 1) - 1) / s.stride.w + 1;
      const Shape4 want{c.input.n, s.out_channels, ho, wo};
      if (got == want) return {};
      return s.describe() + ": got " + got.to_string() + ", want " + want.to_string();
    });
  }
  return rec.finish();
}

CheckResult check_integer_exact(std::uint64_t seed, int cases) {
  Recorder rec("conv2d exact on integer data");
  Rng rng(seed ^ 0x50);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      // Small integers keep every partial sum exact in float, so summation
      // order cannot matter and the fast path must match bit for bit.
      const ConvCase c = random_conv_case(rng, i);
      const Tensor x = random_integers(c.input, rng, -4, 4);
      const Tensor w = random_integers(c.spec.weight_shape(), rng, -3, 3);
      std::vector<float> b;
      if (c.spec.has_bias) {
        for (std::int64_t o = 0; o < c.spec.out_channels; ++o) b.push_back(static_cast<float>(rng.uniform_int(-5, 5)));
      }
      return exact(conv2d(x, w, b, c.spec), oracle::conv2d(x, w, b, c.spec));
    });
  }
  return rec.finish();
}

CheckResult check_grouped_equivalence(std::uint64_t seed, int cases) {
  Recorder rec("depth-wise == block-diagonal dense conv");
  Rng rng(seed ^ 0x40);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      ConvCase c = random_conv_case(rng, 20 + i % 20);  // depth-wise slice of the sweep
      ConvSpec dw = c.spec;
      dw.has_bias = false;
      const Tensor x = random_tensor(c.input, rng);
      const Tensor w = random_tensor(dw.weight_shape(), rng);
      ConvSpec dense = dw;
      dense.groups = 1;
      Tensor wd(dense.weight_shape());
      for (std::int64_t ch = 0; ch < dw.in_channels; ++ch) {
        for (std::int64_t ky = 0; ky < dw.kernel.h; ++ky) {
          for (std::int64_t kx = 0; kx < dw.kernel.w; ++kx) wd.at(ch, ch, ky, kx) = w.at(ch, 0, ky, kx);
        }
      }
      return compare(conv2d(x, w, {}, dw), conv2d(x, wd, {}, dense), oracle::kConvTolerance);
    });
  }
  return rec.finish();
}

CheckResult check_separable(std::uint64_t seed, int cases) {
  Recorder rec("rank-1 3x3 == 3x1 then 1x3");
  Rng rng(seed ^ 0x30);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&] {
      const std::int64_t ch = rng.uniform_int(1, 8);
      const std::int64_t d = kDilations[static_cast<std::size_t>(i % 5)];
      const Tensor x = random_tensor({1, ch, rng.uniform_int(1, 16), rng.uniform_int(1, 16)}, rng);
      const ConvSpec vert = depthwise_vertical(ch, 3, d);
      const ConvSpec horiz = depthwise_horizontal(ch, 3, d);
      ConvSpec full = standard_conv(ch, ch, 3);
      full.groups = ch;
      full.dilation = {d, d};
      full.padding = {d, d};
      const Tensor u = random_tensor(vert.weight_shape(), rng);
      const Tensor v = random_tensor(horiz.weight_shape(), rng);
      Tensor k(full.weight_shape());
      for (std::int64_t c = 0; c < ch; ++c) {
        for (std::int64_t ky = 0; ky < 3; ++ky) {
          for (std::int64_t kx = 0; kx < 3; ++kx) k.at(c, 0, ky, kx) = u.at(c, 0, ky, 0) * v.at(c, 0, 0, kx);
        }
      }
      const Tensor pair = conv2d(conv2d(x, u, {}, vert), v, {}, horiz);
      return compare(pair, conv2d(x, k, {}, full), 1e-5);
    });
  }
  return rec.finish();
}

CheckResult check_linearity(std::uint64_t seed, int cases) {
  Recorder rec("linearity of conv2d, bilinear, avg_pool");
  Rng rng(seed ^ 0x20);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const float alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
      auto combine = [&](const Tensor& a, const Tensor& b) {
        Tensor out(a.shape());
        for (std::size_t j = 0; j < out.size(); ++j) out.values()[j] = alpha * a.values()[j] + beta * b.values()[j];
        return out;
      };
      ConvCase c = random_conv_case(rng, i);
      c.spec.has_bias = false;
      const Tensor x = random_tensor(c.input, rng), y = random_tensor(c.input, rng);
      const Tensor w = random_tensor(c.spec.weight_shape(), rng);
      auto f = [&](const Tensor& t) { return conv2d(t, w, {}, c.spec); };
      std::string why = compare(f(combine(x, y)), combine(f(x), f(y)), 1e-5);
      if (!why.empty()) return "conv2d " + why;

      const std::int64_t up = 1 + i % 8;
      why = compare(bilinear_upsample(combine(x, y), up),
                    combine(bilinear_upsample(x, up), bilinear_upsample(y, up)), 1e-5);
      if (!why.empty()) return "bilinear " + why;

      const std::int64_t pf = std::int64_t{1} << (i % 3);
      const Tensor p = random_tensor({1, 2, pf * 4, pf * 3}, rng), q = random_tensor(p.shape(), rng);
      why = compare(avg_pool_downsample(combine(p, q), pf),
                    combine(avg_pool_downsample(p, pf), avg_pool_downsample(q, pf)), 1e-5);
      return why.empty() ? why : "avg_pool " + why;
    });
  }
  return rec.finish();
}

CheckResult check_prelu_monotone(std::uint64_t seed, int cases) {
  Recorder rec("prelu monotone for a >= 0");
  Rng rng(seed ^ 0x10);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const std::int64_t ch = rng.uniform_int(1, 8), len = rng.uniform_int(2, 64);
      Tensor x = random_tensor({1, ch, 1, len}, rng, -4, 4);
      for (std::int64_t c = 0; c < ch; ++c) std::sort(x.plane(0, c), x.plane(0, c) + len);
      const Tensor y = prelu(x, {random_vector(ch, rng, 0, 2)});
      for (std::int64_t c = 0; c < ch; ++c) {
        for (std::int64_t j = 1; j < len; ++j) {
          if (y.at(0, c, 0, j) < y.at(0, c, 0, j - 1)) {
            return "decrease at channel " + std::to_string(c) + ", position " + std::to_string(j);
          }
        }
      }
      return {};
    });
  }
  return rec.finish();
}

CheckResult check_residual_identity(std::uint64_t seed, int cases) {
  Recorder rec("zeroed DAB module is the identity");
  Rng rng(seed ^ 0x0F);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const DabModuleSpec m = random_module(rng);
      const Size2 hw{rng.uniform_int(1, 16), rng.uniform_int(1, 16)};
      const WeightStore zeros = init_plan_weights(build_module_plan(m, hw, "m"), 0, 0.0f);
      const Tensor x = random_tensor({rng.uniform_int(1, 2), m.channels, hw.h, hw.w}, rng, -5, 5);
      const Tensor y = dab_module_forward(x, m, zeros, "m");
      if (y.shape() != x.shape()) return "shape " + y.shape().to_string();
      float dev = 0.0f;
      for (std::size_t j = 0; j < x.size(); ++j) dev = std::max(dev, std::fabs(y.values()[j] - x.values()[j]));
      if (dev != 0.0f) return "max deviation " + std::to_string(dev);
      return {};
    });
  }
  return rec.finish();
}

CheckResult check_module_shape(std::uint64_t seed, int cases) {
  Recorder rec("DAB module preserves shape");
  Rng rng(seed ^ 0x0E);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const DabModuleSpec m = random_module(rng);
      const Size2 hw{rng.uniform_int(1, 16), rng.uniform_int(1, 16)};
      const WeightStore w = init_plan_weights(build_module_plan(m, hw, "m"), rng.next_u64(), 0.5f);
      const Tensor x = random_tensor({1, m.channels, hw.h, hw.w}, rng);
      const Tensor y = dab_module_forward(x, m, w, "m");
      if (y.shape() == x.shape()) return {};
      return "W=" + std::to_string(m.channels) + " d=" + std::to_string(m.dilation) + ": " + y.shape().to_string();
    });
  }
  return rec.finish();
}

CheckResult check_network_trace(std::uint64_t seed, int cases) {
  Recorder rec("forward shapes match plan, deterministic");
  Rng rng(seed ^ 0x0D);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const NetworkSpec spec = i == 0 ? NetworkSpec{} : random_network(rng);
      const Size2 hw{8 * rng.uniform_int(1, 6), 8 * rng.uniform_int(1, 8)};
      const WeightStore w = init_random_weights(spec, rng.next_u64());
      Tensor image({1, 3, hw.h, hw.w});
      fill_uniform(image, rng, 0, 1);
      ForwardTrace trace;
      const Tensor a = dabnet_forward(image, spec, w, &trace);
      const Tensor b = dabnet_forward(image, spec, w);
      if (!(a == b)) return "two forward passes differ";
      const NetworkPlan plan = build_plan(spec, hw);
      for (const auto& [name, shape] : trace) {
        if (plan.layer(name).output != shape) {
          return name + ": forward " + shape.to_string() + ", plan " + plan.layer(name).output.to_string();
        }
      }
      const Shape4& out = a.shape();
      if (out != Shape4{1, spec.num_classes, hw.h, hw.w}) return "logits " + out.to_string();
      if (plan.layer("block1.concat").output.c != 2 * spec.block1_channels() + 3 ||
          plan.layer("block2.concat").output.c != 2 * spec.block2_channels() + 3) {
        return "inter-block concatenation widths";
      }
      return {};
    });
  }
  return rec.finish();
}

CheckResult check_param_agreement(std::uint64_t seed, int cases) {
  Recorder rec("closed-form params == store enumeration");
  Rng rng(seed ^ 0x0C);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const NetworkSpec spec = i == 0 ? NetworkSpec{} : random_network(rng);
      const std::int64_t closed = count_params(spec).total;
      const std::int64_t stored = count_store_params(init_random_weights(spec, 0));
      if (closed == stored) return {};
      return "closed form " + std::to_string(closed) + " vs store " + std::to_string(stored);
    });
  }
  return rec.finish();
}

CheckResult check_asymmetric_macs(std::uint64_t seed, int cases) {
  Recorder rec("(3x1)+(1x3) MACs == 2/3 of 3x3");
  Rng rng(seed ^ 0x0B);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const std::int64_t ch = rng.uniform_int(1, 256);
      const std::int64_t d = kDilations[static_cast<std::size_t>(i % 5)];
      const Size2 hw{8 * rng.uniform_int(1, 256), 8 * rng.uniform_int(1, 256)};
      ConvSpec full = standard_conv(ch, ch, 3);
      full.groups = ch;
      full.dilation = {d, d};
      full.padding = {d, d};
      const std::int64_t pair = depthwise_vertical(ch, 3, d).macs(hw) + depthwise_horizontal(ch, 3, d).macs(hw);
      if (3 * pair == 2 * full.macs(hw)) return {};
      return "pair " + std::to_string(pair) + " vs full " + std::to_string(full.macs(hw));
    });
  }
  return rec.finish();
}

CheckResult check_miou(std::uint64_t seed, int cases) {
  Recorder rec("mIoU fixtures, additivity, transpose");
  rec.run(-2, []() -> std::string {
    LabelMap gt(1, 2, 4), pred(1, 2, 4);
    gt.labels = {0, 0, 0, 0, 1, 1, 1, 1};
    pred.labels = {0, 0, 0, 1, 0, 1, 1, 1};
    ConfusionMatrix cm(2);
    cm.accumulate(gt, pred);
    if (cm.count(0, 0) != 3 || cm.count(0, 1) != 1 || cm.count(1, 0) != 1 || cm.count(1, 1) != 3) return "tally";
    return mean_iou(cm) == 0.6 ? std::string{} : "mIoU " + std::to_string(mean_iou(cm));
  });
  Rng rng(seed ^ 0x0A);
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      const auto k = static_cast<std::int32_t>(rng.uniform_int(1, 19));
      const std::int64_t h = rng.uniform_int(1, 16), w = rng.uniform_int(1, 16);
      const LabelMap g1 = random_labels(rng, 1, h, w, k), p1 = random_labels(rng, 1, h, w, k);
      const LabelMap g2 = random_labels(rng, 1, h, w, k), p2 = random_labels(rng, 1, h, w, k);

      ConfusionMatrix perfect(k);
      perfect.accumulate(g1, g1);
      if (100.0 * mean_iou(perfect) != 100.0) return "perfect prediction below 100";

      ConfusionMatrix a(k), b(k), both(k);
      a.accumulate(g1, p1);
      b.accumulate(g2, p2);
      both.accumulate(g1, p1);
      both.accumulate(g2, p2);
      a += b;
      if (!(a == both)) return "confusion matrices are not additive";

      ConfusionMatrix swapped(k);
      swapped.accumulate(p1, g1);
      ConfusionMatrix forward(k);
      forward.accumulate(g1, p1);
      if (!(swapped == forward.transposed())) return "swapping roles does not transpose";
      if (mean_iou(forward) != mean_iou(swapped)) return "mIoU not transpose invariant";
      return {};
    });
  }
  return rec.finish();
}

CheckResult check_persistence(std::uint64_t seed, int cases) {
  Recorder rec(".dabw and PGM round trips");
  Rng rng(seed ^ 0x09);
  static constexpr std::array<float, 6> kSpecial{-0.0f, 1e-45f, -3.4e38f, INFINITY, -INFINITY, NAN};
  for (int i = 0; i < cases; ++i) {
    rec.run(i, [&]() -> std::string {
      WeightStore store;
      const std::int64_t entries = rng.uniform_int(0, 6);
      for (std::int64_t e = 0; e < entries; ++e) {
        Tensor t = random_tensor({rng.uniform_int(1, 4), rng.uniform_int(1, 4), rng.uniform_int(1, 3), rng.uniform_int(1, 3)},
                                 rng, -100, 100);
        if (rng.uniform_int(0, 1) == 1) {
          t.values()[0] = kSpecial[static_cast<std::size_t>(rng.uniform_int(0, 5))];
        }
        store.insert("layer" + std::to_string(e) + ".w" + std::to_string(rng.uniform_int(0, 999)), std::move(t));
      }
      const std::vector<std::byte> bytes = encode_weights(store);
      const WeightStore back = decode_weights(bytes);
      if (encode_weights(back) != bytes) return ".dabw re-encoding differs";
      auto a = store.begin();
      for (auto b = back.begin(); b != back.end(); ++a, ++b) {
        if (a->first != b->first || a->second.shape() != b->second.shape() ||
            std::memcmp(a->second.data(), b->second.data(), a->second.size() * sizeof(float)) != 0) {
          return ".dabw entry '" + a->first + "' changed";
        }
      }
      if (back.size() != store.size()) return ".dabw entry count";

      const LabelMap labels = random_labels(rng, 1, rng.uniform_int(1, 40), rng.uniform_int(1, 40), 256);
      if (!(decode_pgm(encode_pgm(labels)) == labels)) return "PGM round trip differs";
      return {};
    });
  }
  return rec.finish();
}

std::vector<CheckResult> run_all(std::uint64_t seed, int cases,
                                 const std::function<void(const CheckResult&)>& on_result) {
  using Check = CheckResult (*)(std::uint64_t, int);
  const int few = std::max(1, cases / 25);
  const std::vector<std::pair<Check, int>> checks{
      {check_conv2d, cases},
      {check_batch_norm, cases},
      {check_prelu, cases},
      {check_max_pool, cases},
      {check_avg_pool, cases},
      {check_bilinear, cases},
      {check_conv_shape_law, cases},
      {check_integer_exact, cases},
      {check_grouped_equivalence, cases},
      {check_separable, std::max(1, cases / 2)},
      {check_linearity, cases},
      {check_prelu_monotone, cases},
      {check_residual_identity, cases},
      {check_module_shape, cases},
      {check_network_trace, few},
      {check_param_agreement, few},
      {check_asymmetric_macs, cases},
      {check_miou, cases},
      {check_persistence, cases},
  };
  std::vector<CheckResult> results;
  for (const auto& [check, n] : checks) {
    results.push_back(check(seed, n));
    if (on_result) on_result(results.back());
  }
  return results;
}

}  // namespace dabnet::selftest
