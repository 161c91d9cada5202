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
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dabnet/nn_ops.hpp"
#include "dabnet/tensor.hpp"

namespace dabnet {

/// Named weight tensors in insertion order.
///
/// Vectors (biases, batch-norm statistics, PReLU slopes) are stored as
/// (C, 1, 1, 1) tensors; convolution weights keep their (Cout, Cin/g, kh, kw)
/// layout.
class WeightStore {
 public:
  using Entry = std::pair<std::string, Tensor>;

  /// Throws WeightStoreError if the name is already present.
  void insert(std::string name, Tensor tensor);
  /// Throws WeightStoreError naming the key when absent.
  const Tensor& get(std::string_view name) const;
  Tensor& get(std::string_view name);
  bool contains(std::string_view name) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Sum of element counts over every stored tensor.
  std::int64_t element_count() const;

  friend bool operator==(const WeightStore& a, const WeightStore& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Batch-norm parameters stored under `<prefix>.gamma|beta|mean|var`.
BnParams load_bn(const WeightStore& store, const std::string& prefix, float epsilon);
/// PReLU slopes stored under `<prefix>.slope`.
PreluParams load_prelu(const WeightStore& store, const std::string& prefix);

}  // namespace dabnet
