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

#include "gemm.hpp"

#include <algorithm>
#include <vector>

namespace dabnet::detail {
namespace {

using v16 = float __attribute__((vector_size(64)));

constexpr int kRows = 8;
constexpr int kLanes = 16;

// Same vector with 4-byte alignment, for unaligned loads and stores.
using v16u = float __attribute__((vector_size(64), aligned(4)));

inline v16 load(const float* p) { return *reinterpret_cast<const v16u*>(p); }

inline void store(float* p, v16 v) { *reinterpret_cast<v16u*>(p) = v; }

// R rows x (V*16) columns register tile. a_pack holds the R rows of A
// interleaved as a_pack[k*kRows + r].
template <int R, int V>
void tile(std::int64_t k, const float* __restrict a_pack, const float* __restrict b, std::int64_t ldb,
          float* __restrict c, std::int64_t ldc) {
  v16 acc[R][V];
#pragma GCC unroll 8
  for (int r = 0; r < R; ++r)
#pragma GCC unroll 4
    for (int v = 0; v < V; ++v) acc[r][v] = load(c + r * ldc + v * kLanes);

  for (std::int64_t p = 0; p < k; ++p) {
    v16 bv[V];
#pragma GCC unroll 4
    for (int v = 0; v < V; ++v) bv[v] = load(b + p * ldb + v * kLanes);
    const float* ap = a_pack + p * kRows;
#pragma GCC unroll 8
    for (int r = 0; r < R; ++r) {
      const float av = ap[r];
#pragma GCC unroll 4
      for (int v = 0; v < V; ++v) acc[r][v] += av * bv[v];
    }
  }

#pragma GCC unroll 8
  for (int r = 0; r < R; ++r)
#pragma GCC unroll 4
    for (int v = 0; v < V; ++v) store(c + r * ldc + v * kLanes, acc[r][v]);
}

// One block of up to kRows rows of C against columns [0, n) of B.
template <int R>
void row_block(std::int64_t n, std::int64_t k, const float* a_pack, const float* b, std::int64_t ldb,
               float* c, std::int64_t ldc) {
  std::int64_t j = 0;
  for (; j + 3 * kLanes <= n; j += 3 * kLanes) tile<R, 3>(k, a_pack, b + j, ldb, c + j, ldc);
  for (; j + 2 * kLanes <= n; j += 2 * kLanes) tile<R, 2>(k, a_pack, b + j, ldb, c + j, ldc);
  for (; j + kLanes <= n; j += kLanes) tile<R, 1>(k, a_pack, b + j, ldb, c + j, ldc);
  for (; j < n; ++j) {
    for (int r = 0; r < R; ++r) {
      float acc = c[r * ldc + j];
      for (std::int64_t p = 0; p < k; ++p) acc += a_pack[p * kRows + r] * b[p * ldb + j];
      c[r * ldc + j] = acc;
    }
  }
}

void dispatch(int rows, std::int64_t n, std::int64_t k, const float* a_pack, const float* b, std::int64_t ldb,
              float* c, std::int64_t ldc) {
  switch (rows) {
    case 8: row_block<8>(n, k, a_pack, b, ldb, c, ldc); break;
    case 7: row_block<7>(n, k, a_pack, b, ldb, c, ldc); break;
    case 6: row_block<6>(n, k, a_pack, b, ldb, c, ldc); break;
    case 5: row_block<5>(n, k, a_pack, b, ldb, c, ldc); break;
    case 4: row_block<4>(n, k, a_pack, b, ldb, c, ldc); break;
    case 3: row_block<3>(n, k, a_pack, b, ldb, c, ldc); break;
    case 2: row_block<2>(n, k, a_pack, b, ldb, c, ldc); break;
    default: row_block<1>(n, k, a_pack, b, ldb, c, ldc); break;
  }
}

// Depth of one pass over K and width of one pass over N; a kKc x kNc slice
// of B stays in L2 while every row block of A streams past it.
constexpr std::int64_t kKc = 256;
constexpr std::int64_t kNc = 256;
constexpr std::int64_t kStrip = 3 * kLanes;

}  // namespace

void gemm_accumulate(std::int64_t m, std::int64_t n, std::int64_t k, const float* a, std::int64_t lda,
                     const float* b, std::int64_t ldb, float* c, std::int64_t ldc) {
  if (m <= 0 || n <= 0 || k <= 0) return;
  const std::int64_t blocks = (m + kRows - 1) / kRows;
  std::vector<float> a_pack(static_cast<std::size_t>(blocks * kRows * kKc));
  std::vector<float> b_pack(static_cast<std::size_t>(kKc * kStrip));
  // Splitting K into consecutive passes keeps each C element's sum in
  // ascending k order: partial sums go through C between passes.
  for (std::int64_t p0 = 0; p0 < k; p0 += kKc) {
    const std::int64_t kc = k - p0 < kKc ? k - p0 : kKc;
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
      float* dst = a_pack.data() + blk * kRows * kKc;
      for (std::int64_t p = 0; p < kc; ++p) {
        for (int r = 0; r < kRows; ++r) {
          const std::int64_t row = blk * kRows + r;
          dst[p * kRows + r] = row < m ? a[row * lda + p0 + p] : 0.0f;
        }
      }
    }
    for (std::int64_t j0 = 0; j0 < n; j0 += kNc) {
      const std::int64_t nc = n - j0 < kNc ? n - j0 : kNc;
      // Each strip of B is copied so that its kc rows are contiguous.
      for (std::int64_t s0 = 0; s0 < nc; s0 += kStrip) {
        const std::int64_t width = nc - s0 < kStrip ? nc - s0 : kStrip;
        const float* src = b + p0 * ldb + j0 + s0;
        for (std::int64_t p = 0; p < kc; ++p) {
          std::copy_n(src + p * ldb, width, b_pack.data() + p * width);
        }
        for (std::int64_t blk = 0; blk < blocks; ++blk) {
          const int rows = static_cast<int>(m - blk * kRows < kRows ? m - blk * kRows : kRows);
          dispatch(rows, width, kc, a_pack.data() + blk * kRows * kKc, b_pack.data(), width,
                   c + blk * kRows * ldc + j0 + s0, ldc);
        }
      }
    }
  }
}

}  // namespace dabnet::detail
