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

#include "dabnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dabnet/errors.hpp"

namespace dabnet::oracle {
namespace {

void require_channels(const Tensor& t, std::int64_t channels, const char* op) {
  if (t.shape().c != channels) {
    throw ShapeError(std::string(op) + ": input " + t.shape().to_string() + " does not have " +
                     std::to_string(channels) + " channels");
  }
}

}  // namespace

Tensor conv2d(const Tensor& input, const Tensor& weight, std::span<const float> bias, const ConvSpec& spec) {
  spec.validate();
  require_channels(input, spec.in_channels, "oracle conv2d");
  if (weight.shape() != spec.weight_shape()) {
    throw ShapeError("oracle conv2d: weight " + weight.shape().to_string() + " expected " +
                     spec.weight_shape().to_string());
  }
  if (static_cast<std::int64_t>(bias.size()) != (spec.has_bias ? spec.out_channels : 0)) {
    throw ShapeError("oracle conv2d: bias length " + std::to_string(bias.size()) + " does not match spec");
  }
  const Shape4& in = input.shape();
  const Size2 out_hw = spec.output_size({in.h, in.w});
  Tensor out({in.n, spec.out_channels, out_hw.h, out_hw.w});
  const std::int64_t cin_g = spec.in_channels / spec.groups;
  const std::int64_t cout_g = spec.out_channels / spec.groups;
  for (std::int64_t n = 0; n < in.n; ++n) {
    for (std::int64_t co = 0; co < spec.out_channels; ++co) {
      const std::int64_t g = co / cout_g;
      for (std::int64_t oy = 0; oy < out_hw.h; ++oy) {
        for (std::int64_t ox = 0; ox < out_hw.w; ++ox) {
          double acc = spec.has_bias ? bias[static_cast<std::size_t>(co)] : 0.0;
          for (std::int64_t ci = 0; ci < cin_g; ++ci) {
            for (std::int64_t ky = 0; ky < spec.kernel.h; ++ky) {
              for (std::int64_t kx = 0; kx < spec.kernel.w; ++kx) {
                const std::int64_t iy = oy * spec.stride.h - spec.padding.h + ky * spec.dilation.h;
                const std::int64_t ix = ox * spec.stride.w - spec.padding.w + kx * spec.dilation.w;
                if (iy < 0 || iy >= in.h || ix < 0 || ix >= in.w) continue;
                acc += static_cast<double>(input.at(n, g * cin_g + ci, iy, ix)) *
                       static_cast<double>(weight.at(co, ci, ky, kx));
              }
            }
          }
          out.at(n, co, oy, ox) = static_cast<float>(acc);
        }
      }
    }
  }
  return out;
}

Tensor batch_norm(const Tensor& input, const BnParams& p) {
  p.validate(p.channels());
  require_channels(input, p.channels(), "oracle batch_norm");
  Tensor out(input.shape());
  const Shape4& s = input.shape();
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      const auto i = static_cast<std::size_t>(c);
      const double denom = std::sqrt(static_cast<double>(p.running_var[i]) + static_cast<double>(p.epsilon));
      for (std::int64_t y = 0; y < s.h; ++y) {
        for (std::int64_t x = 0; x < s.w; ++x) {
          const double v = input.at(n, c, y, x);
          out.at(n, c, y, x) =
              static_cast<float>(p.gamma[i] * (v - p.running_mean[i]) / denom + static_cast<double>(p.beta[i]));
        }
      }
    }
  }
  return out;
}

Tensor prelu(const Tensor& input, const PreluParams& p) {
  require_channels(input, p.channels(), "oracle prelu");
  Tensor out(input.shape());
  const Shape4& s = input.shape();
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      for (std::int64_t y = 0; y < s.h; ++y) {
        for (std::int64_t x = 0; x < s.w; ++x) {
          const float v = input.at(n, c, y, x);
          out.at(n, c, y, x) = v >= 0.0f ? v : p.slope[static_cast<std::size_t>(c)] * v;
        }
      }
    }
  }
  return out;
}

Tensor max_pool_2x2_s2(const Tensor& input) {
  const Shape4& s = input.shape();
  if (s.h < 2 || s.w < 2) throw DegenerateError("oracle max_pool: input " + s.to_string() + " smaller than 2x2");
  Tensor out({s.n, s.c, s.h / 2, s.w / 2});
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      for (std::int64_t y = 0; y < s.h / 2; ++y) {
        for (std::int64_t x = 0; x < s.w / 2; ++x) {
          float m = input.at(n, c, 2 * y, 2 * x);
          for (std::int64_t dy = 0; dy < 2; ++dy) {
            for (std::int64_t dx = 0; dx < 2; ++dx) m = std::max(m, input.at(n, c, 2 * y + dy, 2 * x + dx));
          }
          out.at(n, c, y, x) = m;
        }
      }
    }
  }
  return out;
}

Tensor avg_pool(const Tensor& input, std::int64_t factor) {
  const Shape4& s = input.shape();
  if (factor < 1) throw ArgumentError("oracle avg_pool: factor must be positive");
  if (s.h % factor != 0 || s.w % factor != 0) {
    throw ShapeError("oracle avg_pool: " + s.to_string() + " not divisible by " + std::to_string(factor));
  }
  Tensor out({s.n, s.c, s.h / factor, s.w / factor});
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      for (std::int64_t y = 0; y < s.h / factor; ++y) {
        for (std::int64_t x = 0; x < s.w / factor; ++x) {
          double sum = 0.0;
          for (std::int64_t dy = 0; dy < factor; ++dy) {
            for (std::int64_t dx = 0; dx < factor; ++dx) sum += input.at(n, c, y * factor + dy, x * factor + dx);
          }
          out.at(n, c, y, x) = static_cast<float>(sum / static_cast<double>(factor * factor));
        }
      }
    }
  }
  return out;
}

Tensor bilinear_upsample(const Tensor& input, std::int64_t factor) {
  if (factor < 1) throw ArgumentError("oracle bilinear: factor must be positive");
  const Shape4& s = input.shape();
  Tensor out({s.n, s.c, s.h * factor, s.w * factor});
  auto source = [factor](std::int64_t dst, std::int64_t len, std::int64_t& lo, std::int64_t& hi) {
    double src = (static_cast<double>(dst) + 0.5) / static_cast<double>(factor) - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(len - 1));
    lo = static_cast<std::int64_t>(std::floor(src));
    hi = std::min(lo + 1, len - 1);
    return src - static_cast<double>(lo);
  };
  for (std::int64_t n = 0; n < s.n; ++n) {
    for (std::int64_t c = 0; c < s.c; ++c) {
      for (std::int64_t y = 0; y < s.h * factor; ++y) {
        std::int64_t y0 = 0, y1 = 0;
        const double fy = source(y, s.h, y0, y1);
        for (std::int64_t x = 0; x < s.w * factor; ++x) {
          std::int64_t x0 = 0, x1 = 0;
          const double fx = source(x, s.w, x0, x1);
          const double top = (1.0 - fx) * input.at(n, c, y0, x0) + fx * input.at(n, c, y0, x1);
          const double bottom = (1.0 - fx) * input.at(n, c, y1, x0) + fx * input.at(n, c, y1, x1);
          out.at(n, c, y, x) = static_cast<float>((1.0 - fy) * top + fy * bottom);
        }
      }
    }
  }
  return out;
}

Comparison compare(const Tensor& actual, const Tensor& expected, double rel, double abs_floor) {
  Comparison result;
  if (actual.shape() != expected.shape()) {
    result.ok = false;
    result.detail = "shape " + actual.shape().to_string() + " vs expected " + expected.shape().to_string();
    return result;
  }
  result.bound = rel * static_cast<double>(max_abs(expected)) + abs_floor;
  const auto a = actual.values();
  const auto e = expected.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double err = std::fabs(static_cast<double>(a[i]) - static_cast<double>(e[i]));
    if (!(err <= result.bound) && result.ok) {
      result.ok = false;
      const auto idx = expected.unflatten(i);
      std::ostringstream os;
      os << "at (" << idx[0] << "," << idx[1] << "," << idx[2] << "," << idx[3] << "): got " << a[i]
         << ", expected " << e[i];
      result.detail = os.str();
    }
    if (std::isnan(err)) {
      result.max_error = err;
    } else if (err > result.max_error) {
      result.max_error = err;
    }
  }
  return result;
}

}  // namespace dabnet::oracle
