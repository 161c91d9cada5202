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

#include "dabnet/rng.hpp"

#include <cmath>
#include <string>

#include "dabnet/errors.hpp"

namespace dabnet {

std::uint64_t Rng::next_u64() noexcept {
  state_ += kGamma;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * kMix1;
  z = (z ^ (z >> 27)) * kMix2;
  return z ^ (z >> 31);
}

float Rng::next_unit() noexcept {
  return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f;
}

float Rng::uniform(float lo, float hi) {
  if (!(lo <= hi)) {
    throw ArgumentError("uniform range is empty: lo=" + std::to_string(lo) +
                        " > hi=" + std::to_string(hi));
  }
  const float u = next_unit();
  if (lo == hi) return lo;
  float v = lo + (hi - lo) * u;
  // Rounding can land exactly on hi for u close to 1.
  if (v >= hi) v = std::nextafter(hi, lo);
  if (v < lo) v = lo;
  return v;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ArgumentError("uniform_int range is empty");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

}  // namespace dabnet
