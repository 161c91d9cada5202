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

#include "dabnet/weight_store.hpp"

#include "dabnet/errors.hpp"

namespace dabnet {

void WeightStore::insert(std::string name, Tensor tensor) {
  if (index_.contains(name)) throw WeightStoreError("duplicate weight entry '" + name + "'");
  index_.emplace(name, entries_.size());
  entries_.emplace_back(std::move(name), std::move(tensor));
}

const Tensor& WeightStore::get(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) throw WeightStoreError("missing weight entry '" + std::string(name) + "'");
  return entries_[it->second].second;
}

Tensor& WeightStore::get(std::string_view name) {
  return const_cast<Tensor&>(static_cast<const WeightStore&>(*this).get(name));
}

bool WeightStore::contains(std::string_view name) const { return index_.contains(std::string(name)); }

std::int64_t WeightStore::element_count() const {
  std::int64_t total = 0;
  for (const auto& [name, t] : entries_) total += static_cast<std::int64_t>(t.size());
  return total;
}

namespace {

std::vector<float> vector_of(const WeightStore& store, const std::string& name) {
  const auto v = store.get(name).values();
  return {v.begin(), v.end()};
}

}  // namespace

BnParams load_bn(const WeightStore& store, const std::string& prefix, float epsilon) {
  return {vector_of(store, prefix + ".gamma"), vector_of(store, prefix + ".beta"),
          vector_of(store, prefix + ".mean"), vector_of(store, prefix + ".var"), epsilon};
}

PreluParams load_prelu(const WeightStore& store, const std::string& prefix) {
  return {vector_of(store, prefix + ".slope")};
}

}  // namespace dabnet
