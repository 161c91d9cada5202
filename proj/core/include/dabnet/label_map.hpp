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
#include <string>
#include <vector>

namespace dabnet {

/// Integer class labels laid out (n, 1, h, w), row-major.
struct LabelMap {
  std::int64_t n = 0;
  std::int64_t h = 0;
  std::int64_t w = 0;
  std::vector<std::int32_t> labels;

  LabelMap() = default;
  LabelMap(std::int64_t n, std::int64_t h, std::int64_t w, std::int32_t fill = 0)
      : n(n), h(h), w(w), labels(static_cast<std::size_t>(n * h * w), fill) {}

  std::size_t size() const noexcept { return labels.size(); }
  std::int32_t& at(std::int64_t b, std::int64_t y, std::int64_t x) {
    return labels[static_cast<std::size_t>((b * h + y) * w + x)];
  }
  std::int32_t at(std::int64_t b, std::int64_t y, std::int64_t x) const {
    return labels[static_cast<std::size_t>((b * h + y) * w + x)];
  }
  std::string dims() const {
    return "(" + std::to_string(n) + ",1," + std::to_string(h) + "," + std::to_string(w) + ")";
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

}  // namespace dabnet
