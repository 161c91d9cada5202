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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "dabnet/network_spec.hpp"
#include "dabnet/tensor.hpp"
#include "dabnet/weight_store.hpp"

namespace dabnet {

// .dabw weight file, all integers little-endian:
//
//   "DABW" | u32 version (1) | u32 record count
//   per record: u16 name length | name bytes (UTF-8) | u8 dtype (0 = f32)
//               | u8 ndim (1..4) | ndim x u32 dims | prod(dims) x f32 LE
//
// The writer always emits ndim = 4; the reader pads shorter shapes with
// trailing 1s, so a 1-D (C) record loads as (C, 1, 1, 1).
inline constexpr std::uint32_t kDabwVersion = 1;

std::vector<std::byte> encode_weights(const WeightStore& store);
/// Throws FormatError (bad magic, version, dtype, duplicate name, trailing
/// bytes) or TruncationError with the offending offset.
WeightStore decode_weights(std::span<const std::byte> bytes);

void save_weights(const WeightStore& store, const std::filesystem::path& path);
/// When `spec` is given the loaded store must match it exactly
/// (WeightStoreError otherwise).
WeightStore load_weights(const std::filesystem::path& path, const std::optional<NetworkSpec>& spec = std::nullopt);

// .tns raw tensor dump: "TNS1" | 4 x u32 dims (n, c, h, w) | n*c*h*w f32 LE.
std::vector<std::byte> encode_tensor(const Tensor& t);
Tensor decode_tensor(std::span<const std::byte> bytes);
void save_tensor(const Tensor& t, const std::filesystem::path& path);
Tensor load_tensor(const std::filesystem::path& path);

/// Subtracts a per-channel mean (given on the [0, 1] pixel scale) from an
/// (n, 3, h, w) image.
Tensor preprocess(const Tensor& image, const std::array<float, 3>& means);

/// Whole-file read/write; IoError names the path on failure.
std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace dabnet
