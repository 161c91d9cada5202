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

#include "dabnet/metrics.hpp"

#include <numeric>
#include <string>

#include "dabnet/errors.hpp"

namespace dabnet {

ConfusionMatrix::ConfusionMatrix(std::int64_t num_classes) : k_(num_classes) {
  if (num_classes < 1) throw ArgumentError("confusion matrix needs at least one class");
  counts_.assign(static_cast<std::size_t>(num_classes * num_classes), 0);
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void ConfusionMatrix::accumulate(const LabelMap& gt, const LabelMap& pred, std::int32_t ignore) {
  if (gt.n != pred.n || gt.h != pred.h || gt.w != pred.w || gt.size() != pred.size()) {
    throw ShapeError("label maps differ in shape: ground truth " + gt.dims() + " vs prediction " +
                     pred.dims());
  }
  auto where = [&](std::size_t i) {
    const auto idx = static_cast<std::int64_t>(i);
    const std::int64_t x = idx % gt.w, y = (idx / gt.w) % gt.h, n = idx / (gt.w * gt.h);
    return "at (n=" + std::to_string(n) + ", y=" + std::to_string(y) + ", x=" + std::to_string(x) + ")";
  };
  // Validate first so a failure leaves the matrix untouched.
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::int32_t g = gt.labels[i], p = pred.labels[i];
    if (g == ignore) continue;
    if (g < 0 || g >= k_) {
      throw DataError("ground-truth label " + std::to_string(g) + " outside [0, " + std::to_string(k_) + ") " +
                      where(i));
    }
    if (p < 0 || p >= k_) {
      throw DataError("predicted label " + std::to_string(p) + " outside [0, " + std::to_string(k_) + ") " +
                      where(i));
    }
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const std::int32_t g = gt.labels[i];
    if (g == ignore) continue;
    ++counts_[static_cast<std::size_t>(g * k_ + pred.labels[i])];
  }
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.k_ != k_) throw ArgumentError("cannot add confusion matrices of different class counts");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  ConfusionMatrix t(k_);
  for (std::int64_t g = 0; g < k_; ++g) {
    for (std::int64_t p = 0; p < k_; ++p) t.counts_[static_cast<std::size_t>(p * k_ + g)] = count(g, p);
  }
  return t;
}

std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& cm) {
  const std::int64_t k = cm.num_classes();
  std::vector<std::optional<double>> out(static_cast<std::size_t>(k));
  for (std::int64_t c = 0; c < k; ++c) {
    std::uint64_t row = 0, col = 0;
    for (std::int64_t j = 0; j < k; ++j) {
      row += cm.count(c, j);
      col += cm.count(j, c);
    }
    const std::uint64_t tp = cm.count(c, c);
    const std::uint64_t denom = row + col - tp;
    if (denom == 0) continue;
    out[static_cast<std::size_t>(c)] = static_cast<double>(tp) / static_cast<double>(denom);
  }
  return out;
}

double mean_iou(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int present = 0;
  for (const auto& v : iou_per_class(cm)) {
    if (!v) continue;
    sum += *v;
    ++present;
  }
  if (present == 0) throw UndefinedMetricError("mIoU undefined: no class occurs in ground truth or prediction");
  return sum / present;
}

}  // namespace dabnet
