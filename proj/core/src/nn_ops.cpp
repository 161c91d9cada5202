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

#include "dabnet/nn_ops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dabnet/errors.hpp"
#include "dabnet/parallel.hpp"
#include "gemm.hpp"

namespace dabnet {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Target number of floats in one im2col tile (about 1 MiB).
constexpr std::int64_t kColumnTileFloats = 1 << 18;

void init_bias(Tensor& out, std::span<const float> bias) {
  const Shape4& s = out.shape();
  const std::int64_t plane = s.h * s.w;
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      std::fill_n(out.plane(n, c), plane, bias.empty() ? 0.0f : bias[static_cast<std::size_t>(c)]);
    }
  }
}

void depthwise(const Tensor& input, const Tensor& weight, const ConvSpec& spec, Tensor& out) {
  const Shape4& in = input.shape();
  const Shape4& os = out.shape();
  const std::int64_t kh = spec.kernel.h, kw = spec.kernel.w;
  const std::int64_t sh = spec.stride.h, sw = spec.stride.w;
  const std::int64_t ph = spec.padding.h, pw = spec.padding.w;
  const std::int64_t dh = spec.dilation.h, dw = spec.dilation.w;

  parallel_for(0, in.n * in.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const std::int64_t n = idx / in.c, c = idx % in.c;
      const float* src = input.plane(n, c);
      float* dst = out.plane(n, c);
      const float* taps = weight.data() + c * kh * kw;
      for (std::int64_t oy = 0; oy < os.h; ++oy) {
        float* orow = dst + oy * os.w;
        for (std::int64_t ky = 0; ky < kh; ++ky) {
          const std::int64_t iy = oy * sh - ph + ky * dh;
          if (iy < 0 || iy >= in.h) continue;
          const float* irow = src + iy * in.w;
          for (std::int64_t kx = 0; kx < kw; ++kx) {
            const float tap = taps[ky * kw + kx];
            const std::int64_t shift = kx * dw - pw;
            const std::int64_t x0 = std::max<std::int64_t>(0, ceil_div(-shift, sw));
            const std::int64_t x1 = std::min(os.w, floor_div(in.w - 1 - shift, sw) + 1);
            if (sw == 1) {
              for (std::int64_t ox = x0; ox < x1; ++ox) orow[ox] += tap * irow[ox + shift];
            } else {
              for (std::int64_t ox = x0; ox < x1; ++ox) orow[ox] += tap * irow[ox * sw + shift];
            }
          }
        }
      }
    }
  });
}

// Lowers rows [oy0, oy0 + rows) of one group's receptive windows into a
// K x (rows * Wo) matrix, K = Cin_g * kh * kw.
void im2col(const Tensor& input, std::int64_t n, std::int64_t c0, const ConvSpec& spec, Size2 out_size,
            std::int64_t oy0, std::int64_t rows, float* col) {
  const Shape4& in = input.shape();
  const std::int64_t cin_g = spec.in_channels / spec.groups;
  const std::int64_t cols = rows * out_size.w;
  std::int64_t r = 0;
  for (std::int64_t ci = 0; ci < cin_g; ++ci) {
    const float* src = input.plane(n, c0 + ci);
    for (std::int64_t ky = 0; ky < spec.kernel.h; ++ky) {
      for (std::int64_t kx = 0; kx < spec.kernel.w; ++kx, ++r) {
        float* dst = col + r * cols;
        const std::int64_t shift = kx * spec.dilation.w - spec.padding.w;
        const std::int64_t x0 = std::clamp<std::int64_t>(ceil_div(-shift, spec.stride.w), 0, out_size.w);
        const std::int64_t x1 =
            std::clamp<std::int64_t>(floor_div(in.w - 1 - shift, spec.stride.w) + 1, x0, out_size.w);
        for (std::int64_t t = 0; t < rows; ++t) {
          float* drow = dst + t * out_size.w;
          const std::int64_t iy = (oy0 + t) * spec.stride.h - spec.padding.h + ky * spec.dilation.h;
          if (iy < 0 || iy >= in.h) {
            std::fill_n(drow, out_size.w, 0.0f);
            continue;
          }
          const float* irow = src + iy * in.w;
          std::fill(drow, drow + x0, 0.0f);
          if (spec.stride.w == 1) {
            std::copy(irow + x0 + shift, irow + x1 + shift, drow + x0);
          } else {
            for (std::int64_t ox = x0; ox < x1; ++ox) drow[ox] = irow[ox * spec.stride.w + shift];
          }
          std::fill(drow + x1, drow + out_size.w, 0.0f);
        }
      }
    }
  }
}

void grouped_gemm(const Tensor& input, const Tensor& weight, const ConvSpec& spec, Size2 out_size,
                  Tensor& out) {
  const Shape4& in = input.shape();
  const std::int64_t groups = spec.groups;
  const std::int64_t cin_g = spec.in_channels / groups;
  const std::int64_t cout_g = spec.out_channels / groups;
  const std::int64_t k = cin_g * spec.kernel.h * spec.kernel.w;
  const std::int64_t plane = out_size.h * out_size.w;

  const bool direct = spec.kernel == Size2{1, 1} && spec.stride == Size2{1, 1} &&
                      spec.padding == Size2{0, 0};
  if (direct) {
    // Input planes already form the K x (H*W) operand.
    constexpr std::int64_t kCols = 512;
    const std::int64_t tiles = ceil_div(plane, kCols);
    parallel_for(0, in.n * groups * tiles, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t task = lo; task < hi; ++task) {
        const std::int64_t tile = task % tiles;
        const std::int64_t g = (task / tiles) % groups;
        const std::int64_t n = task / (tiles * groups);
        const std::int64_t j0 = tile * kCols;
        const std::int64_t cols = std::min(kCols, plane - j0);
        detail::gemm_accumulate(cout_g, cols, k, weight.data() + g * cout_g * k, k,
                                input.plane(n, g * cin_g) + j0, plane,
                                out.plane(n, g * cout_g) + j0, plane);
      }
    });
    return;
  }

  const std::int64_t rows_per_tile =
      std::clamp<std::int64_t>(kColumnTileFloats / std::max<std::int64_t>(k * out_size.w, 1), 1,
                               out_size.h);
  const std::int64_t tiles = ceil_div(out_size.h, rows_per_tile);
  parallel_for(0, in.n * groups * tiles, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<float> col;
    for (std::int64_t task = lo; task < hi; ++task) {
      const std::int64_t tile = task % tiles;
      const std::int64_t g = (task / tiles) % groups;
      const std::int64_t n = task / (tiles * groups);
      const std::int64_t oy0 = tile * rows_per_tile;
      const std::int64_t rows = std::min(rows_per_tile, out_size.h - oy0);
      const std::int64_t cols = rows * out_size.w;
      col.resize(static_cast<std::size_t>(k * cols));
      im2col(input, n, g * cin_g, spec, out_size, oy0, rows, col.data());
      detail::gemm_accumulate(cout_g, cols, k, weight.data() + g * cout_g * k, k, col.data(), cols,
                              out.plane(n, g * cout_g) + oy0 * out_size.w, plane);
    }
  });
}

void check_channels(const char* op, const Tensor& t, std::int64_t expected) {
  if (t.shape().c != expected) {
    throw ShapeError(std::string(op) + ": input " + t.shape().to_string() + " has " +
                     std::to_string(t.shape().c) + " channels, parameters expect " +
                     std::to_string(expected));
  }
}

}  // namespace

void ConvSpec::validate() const {
  auto fail = [&](const std::string& why) { throw ArgumentError("invalid conv " + describe() + ": " + why); };
  if (in_channels < 1 || out_channels < 1) fail("channel counts must be positive");
  if (groups < 1) fail("groups must be positive");
  if (in_channels % groups != 0 || out_channels % groups != 0) fail("channels not divisible by groups");
  if (kernel.h < 1 || kernel.w < 1) fail("kernel extent must be >= 1");
  if (stride.h < 1 || stride.w < 1) fail("stride must be >= 1");
  if (dilation.h < 1 || dilation.w < 1) fail("dilation must be >= 1");
  if (padding.h < 0 || padding.w < 0) fail("padding must be >= 0");
}

Shape4 ConvSpec::weight_shape() const {
  return {out_channels, in_channels / groups, kernel.h, kernel.w};
}

Size2 ConvSpec::output_size(Size2 input) const {
  const std::int64_t ho = floor_div(input.h + 2 * padding.h - dilation.h * (kernel.h - 1) - 1, stride.h) + 1;
  const std::int64_t wo = floor_div(input.w + 2 * padding.w - dilation.w * (kernel.w - 1) - 1, stride.w) + 1;
  if (ho < 1 || wo < 1) {
    throw DegenerateError("conv " + describe() + " on " + std::to_string(input.h) + "x" +
                          std::to_string(input.w) + " input yields empty output " +
                          std::to_string(ho) + "x" + std::to_string(wo));
  }
  return {ho, wo};
}

std::int64_t ConvSpec::param_count() const {
  return kernel.h * kernel.w * (in_channels / groups) * out_channels + (has_bias ? out_channels : 0);
}

std::int64_t ConvSpec::macs(Size2 input) const {
  const Size2 o = output_size(input);
  return o.h * o.w * out_channels * (in_channels / groups) * kernel.h * kernel.w;
}

std::string ConvSpec::describe() const {
  auto pair = [](Size2 s) { return std::to_string(s.h) + "x" + std::to_string(s.w); };
  return "[" + std::to_string(in_channels) + "->" + std::to_string(out_channels) + " k" +
         pair(kernel) + " s" + pair(stride) + " p" + pair(padding) + " d" + pair(dilation) + " g" +
         std::to_string(groups) + (has_bias ? " bias" : "") + "]";
}

ConvSpec standard_conv(std::int64_t in, std::int64_t out, std::int64_t k, std::int64_t stride, bool bias) {
  ConvSpec s;
  s.in_channels = in;
  s.out_channels = out;
  s.kernel = {k, k};
  s.stride = {stride, stride};
  s.padding = {(k - 1) / 2, (k - 1) / 2};
  s.has_bias = bias;
  return s;
}

ConvSpec pointwise_conv(std::int64_t in, std::int64_t out, bool bias) {
  return standard_conv(in, out, 1, 1, bias);
}

ConvSpec depthwise_vertical(std::int64_t channels, std::int64_t k, std::int64_t dilation) {
  ConvSpec s;
  s.in_channels = s.out_channels = s.groups = channels;
  s.kernel = {k, 1};
  s.dilation = {dilation, 1};
  s.padding = {dilation * (k - 1) / 2, 0};
  return s;
}

ConvSpec depthwise_horizontal(std::int64_t channels, std::int64_t k, std::int64_t dilation) {
  ConvSpec s;
  s.in_channels = s.out_channels = s.groups = channels;
  s.kernel = {1, k};
  s.dilation = {1, dilation};
  s.padding = {0, dilation * (k - 1) / 2};
  return s;
}

BnParams BnParams::identity(std::int64_t channels, float epsilon) {
  const auto c = static_cast<std::size_t>(channels);
  return {std::vector<float>(c, 1.0f), std::vector<float>(c, 0.0f), std::vector<float>(c, 0.0f),
          std::vector<float>(c, 1.0f), epsilon};
}

void BnParams::validate(std::int64_t channels) const {
  const auto c = static_cast<std::size_t>(channels);
  if (gamma.size() != c || beta.size() != c || running_mean.size() != c || running_var.size() != c) {
    throw ShapeError("batch norm parameters sized " + std::to_string(gamma.size()) + "/" +
                     std::to_string(beta.size()) + "/" + std::to_string(running_mean.size()) + "/" +
                     std::to_string(running_var.size()) + " for " + std::to_string(channels) +
                     " channels");
  }
  for (float v : running_var) {
    if (!(v >= 0.0f)) throw ArgumentError("batch norm running variance must be >= 0");
  }
}

PreluParams PreluParams::constant(std::int64_t channels, float a) {
  return {std::vector<float>(static_cast<std::size_t>(channels), a)};
}

Tensor conv2d(const Tensor& input, const Tensor& weight, std::span<const float> bias,
              const ConvSpec& spec) {
  spec.validate();
  const Shape4& in = input.shape();
  check_channels("conv2d", input, spec.in_channels);
  if (weight.shape() != spec.weight_shape()) {
    throw ShapeError("conv2d: weight " + weight.shape().to_string() + " does not match " +
                     spec.weight_shape().to_string() + " required by " + spec.describe());
  }
  if (spec.has_bias != !bias.empty() ||
      (spec.has_bias && static_cast<std::int64_t>(bias.size()) != spec.out_channels)) {
    throw ShapeError("conv2d: bias of length " + std::to_string(bias.size()) + " for " +
                     spec.describe());
  }
  const Size2 out_size = spec.output_size({in.h, in.w});
  Tensor out({in.n, spec.out_channels, out_size.h, out_size.w});
  init_bias(out, bias);
  if (out.empty()) return out;
  if (spec.is_depthwise()) {
    depthwise(input, weight, spec, out);
  } else {
    grouped_gemm(input, weight, spec, out_size, out);
  }
  return out;
}

namespace {

struct Affine {
  std::vector<float> scale;
  std::vector<float> shift;
};

Affine fold(const BnParams& p) {
  Affine a;
  a.scale.resize(p.gamma.size());
  a.shift.resize(p.gamma.size());
  for (std::size_t c = 0; c < p.gamma.size(); ++c) {
    const float inv = 1.0f / std::sqrt(p.running_var[c] + p.epsilon);
    a.scale[c] = p.gamma[c] * inv;
    a.shift[c] = p.beta[c] - p.running_mean[c] * a.scale[c];
  }
  return a;
}

template <typename Fn>
void per_plane(Tensor& t, Fn&& fn) {
  const Shape4& s = t.shape();
  const std::int64_t plane = s.h * s.w;
  parallel_for(0, s.n * s.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) fn(idx % s.c, t.plane(idx / s.c, idx % s.c), plane);
  });
}

void check_prelu(const Tensor& t, const PreluParams& p) {
  if (p.channels() != t.shape().c) {
    throw ShapeError("prelu: " + std::to_string(p.channels()) + " slopes for input " +
                     t.shape().to_string());
  }
}

void check_bn(const Tensor& t, const BnParams& p) {
  if (p.channels() != t.shape().c) {
    throw ShapeError("batch_norm: " + std::to_string(p.channels()) + " channels of parameters for input " +
                     t.shape().to_string());
  }
  p.validate(t.shape().c);
}

}  // namespace

void batch_norm_infer_inplace(Tensor& t, const BnParams& p) {
  check_bn(t, p);
  const Affine a = fold(p);
  per_plane(t, [&](std::int64_t c, float* x, std::int64_t len) {
    const float s = a.scale[c], b = a.shift[c];
    for (std::int64_t i = 0; i < len; ++i) x[i] = x[i] * s + b;
  });
}

void prelu_inplace(Tensor& t, const PreluParams& p) {
  check_prelu(t, p);
  per_plane(t, [&](std::int64_t c, float* x, std::int64_t len) {
    const float a = p.slope[c];
    for (std::int64_t i = 0; i < len; ++i) {
      const float v = x[i], neg = a * v;
      x[i] = v >= 0.0f ? v : neg;
    }
  });
}

void batch_norm_prelu_inplace(Tensor& t, const BnParams& bn, const PreluParams& act) {
  check_bn(t, bn);
  check_prelu(t, act);
  const Affine a = fold(bn);
  per_plane(t, [&](std::int64_t c, float* x, std::int64_t len) {
    const float s = a.scale[c], b = a.shift[c], slope = act.slope[c];
    for (std::int64_t i = 0; i < len; ++i) {
      const float y = x[i] * s + b, neg = slope * y;
      x[i] = y >= 0.0f ? y : neg;
    }
  });
}

Tensor batch_norm_infer(const Tensor& input, const BnParams& p) {
  Tensor out = input;
  batch_norm_infer_inplace(out, p);
  return out;
}

Tensor prelu(const Tensor& input, const PreluParams& p) {
  Tensor out = input;
  prelu_inplace(out, p);
  return out;
}

Tensor max_pool_2x2_s2(const Tensor& input) {
  const Shape4& s = input.shape();
  if (s.h < 2 || s.w < 2) {
    throw DegenerateError("max_pool_2x2_s2 needs H, W >= 2, got " + s.to_string());
  }
  Tensor out({s.n, s.c, s.h / 2, s.w / 2});
  const Shape4& os = out.shape();
  parallel_for(0, s.n * s.c, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const float* src = input.plane(idx / s.c, idx % s.c);
      float* dst = out.plane(idx / s.c, idx % s.c);
      for (std::int64_t y = 0; y < os.h; ++y) {
        const float* r0 = src + 2 * y * s.w;
        const float* r1 = r0 + s.w;
        for (std::int64_t x = 0; x < os.w; ++x) {
          dst[y * os.w + x] = std::max(std::max(r0[2 * x], r0[2 * x + 1]), std::max(r1[2 * x], r1[2 * x + 1]));
        }
      }
    }
  });
  return out;
}

Tensor avg_pool_downsample(const Tensor& input, std::int64_t factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0) {
    throw ArgumentError("avg_pool_downsample factor must be a power of two, got " + std::to_string(factor));
  }
  const Shape4& s = input.shape();
  if (s.h % factor != 0 || s.w % factor != 0) {
    throw ShapeError("avg_pool_downsample: " + s.to_string() + " not divisible by factor " +
                     std::to_string(factor));
  }
  if (factor == 1) return input;
  Tensor out({s.n, s.c, s.h / factor, s.w / factor});
  const Shape4& os = out.shape();
  const double inv = 1.0 / static_cast<double>(factor * factor);
  parallel_for(0, s.n * s.c, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<double> acc(static_cast<std::size_t>(os.w));
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const float* src = input.plane(idx / s.c, idx % s.c);
      float* dst = out.plane(idx / s.c, idx % s.c);
      for (std::int64_t y = 0; y < os.h; ++y) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::int64_t dy = 0; dy < factor; ++dy) {
          const float* row = src + (y * factor + dy) * s.w;
          for (std::int64_t x = 0; x < os.w; ++x) {
            double sum = 0.0;
            for (std::int64_t dx = 0; dx < factor; ++dx) sum += row[x * factor + dx];
            acc[static_cast<std::size_t>(x)] += sum;
          }
        }
        for (std::int64_t x = 0; x < os.w; ++x) {
          dst[y * os.w + x] = static_cast<float>(acc[static_cast<std::size_t>(x)] * inv);
        }
      }
    }
  });
  return out;
}

namespace {

struct Taps {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  std::vector<float> frac;
};

// Source taps for every destination index along one axis.
Taps axis_taps(std::int64_t src_len, std::int64_t factor) {
  const std::int64_t dst_len = src_len * factor;
  Taps t;
  t.lo.resize(static_cast<std::size_t>(dst_len));
  t.hi.resize(static_cast<std::size_t>(dst_len));
  t.frac.resize(static_cast<std::size_t>(dst_len));
  const float scale = 1.0f / static_cast<float>(factor);
  for (std::int64_t d = 0; d < dst_len; ++d) {
    float src = (static_cast<float>(d) + 0.5f) * scale - 0.5f;
    if (src < 0.0f) src = 0.0f;
    auto lo = static_cast<std::int64_t>(src);
    if (lo > src_len - 1) lo = src_len - 1;
    const auto i = static_cast<std::size_t>(d);
    t.lo[i] = lo;
    t.hi[i] = std::min(lo + 1, src_len - 1);
    t.frac[i] = src - static_cast<float>(lo);
  }
  return t;
}

}  // namespace

Tensor bilinear_upsample(const Tensor& input, std::int64_t factor) {
  if (factor < 1) throw ArgumentError("bilinear_upsample factor must be >= 1, got " + std::to_string(factor));
  const Shape4& s = input.shape();
  Tensor out({s.n, s.c, s.h * factor, s.w * factor});
  if (out.empty()) return out;
  const Shape4& os = out.shape();
  const Taps ty = axis_taps(s.h, factor);
  const Taps tx = axis_taps(s.w, factor);
  parallel_for(0, s.n * s.c, [&](std::int64_t lo, std::int64_t hi) {
    // Every source row interpolated along x once, then rows are blended.
    std::vector<float> rows(static_cast<std::size_t>(s.h * os.w));
    for (std::int64_t idx = lo; idx < hi; ++idx) {
      const float* src = input.plane(idx / s.c, idx % s.c);
      float* dst = out.plane(idx / s.c, idx % s.c);
      for (std::int64_t y = 0; y < s.h; ++y) {
        const float* r = src + y * s.w;
        float* h = rows.data() + y * os.w;
        for (std::int64_t x = 0; x < os.w; ++x) {
          const auto xi = static_cast<std::size_t>(x);
          const float a = r[tx.lo[xi]], b = r[tx.hi[xi]];
          // Lerp form keeps constant fields exactly constant.
          h[x] = a + tx.frac[xi] * (b - a);
        }
      }
      for (std::int64_t y = 0; y < os.h; ++y) {
        const auto yi = static_cast<std::size_t>(y);
        const float* top = rows.data() + ty.lo[yi] * os.w;
        const float* bottom = rows.data() + ty.hi[yi] * os.w;
        const float ly = ty.frac[yi];
        float* orow = dst + y * os.w;
        for (std::int64_t x = 0; x < os.w; ++x) orow[x] = top[x] + ly * (bottom[x] - top[x]);
      }
    }
  });
  return out;
}

}  // namespace dabnet
