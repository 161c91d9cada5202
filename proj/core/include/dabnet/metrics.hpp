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
#include <optional>
#include <vector>

#include "dabnet/label_map.hpp"

namespace dabnet {

/// Ground-truth value excluded from accumulation (Cityscapes convention).
inline constexpr std::int32_t kDefaultIgnoreLabel = 255;

/// K x K pixel co-occurrence counts; count(g, p) is the number of pixels with
/// ground truth g predicted as p.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::int64_t num_classes);

  std::int64_t num_classes() const noexcept { return k_; }
  std::uint64_t count(std::int64_t gt, std::int64_t pred) const {
    return counts_[static_cast<std::size_t>(gt * k_ + pred)];
  }
  std::uint64_t total() const noexcept;

  /// Adds every pixel whose ground truth is not `ignore`. Throws ShapeError on
  /// differing dims and DataError (with pixel coordinates) for labels outside
  /// [0, K). The matrix is unchanged when an error is thrown.
  void accumulate(const LabelMap& gt, const LabelMap& pred, std::int32_t ignore = kDefaultIgnoreLabel);
  /// Element-wise sum; throws ArgumentError on differing K.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  ConfusionMatrix transposed() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::int64_t k_;
  std::vector<std::uint64_t> counts_;
};

/// IoU_c = tp / (row_c + col_c - tp). Classes that occur in neither ground
/// truth nor prediction have no value.
std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& cm);
/// Mean over classes that have an IoU. Throws UndefinedMetricError when none do.
double mean_iou(const ConfusionMatrix& cm);

}  // namespace dabnet
