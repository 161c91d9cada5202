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

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "dabnet/label_map.hpp"
#include "dabnet/tensor.hpp"

namespace dabnet {

// Binary netpbm codecs. Images are PPM "P6" and label maps PGM "P5", both
// with maxval 255. Header fields may be separated by any whitespace and `#`
// comments run to the end of the line; exactly one whitespace byte separates
// the maxval from the raster. ASCII variants (P3/P2) and other maxvals raise
// UnsupportedFormatError.

/// (1, 3, H, W) tensor with channels R, G, B scaled to [0, 1].
Tensor decode_ppm(std::span<const std::byte> bytes);
Tensor load_image_ppm(const std::filesystem::path& path);
/// Inverse of decode_ppm for a (1, 3, H, W) tensor; values are clamped to
/// [0, 1] and rounded to the nearest 1/255.
std::vector<std::byte> encode_ppm(const Tensor& image);
void save_image_ppm(const Tensor& image, const std::filesystem::path& path);

/// One class byte per pixel; the result has n = 1.
LabelMap decode_pgm(std::span<const std::byte> bytes);
LabelMap load_labels_pgm(const std::filesystem::path& path);
/// Requires n == 1 (ShapeError) and every label in [0, 255] (DataError).
std::vector<std::byte> encode_pgm(const LabelMap& labels);
void save_labels_pgm(const LabelMap& labels, const std::filesystem::path& path);

}  // namespace dabnet
