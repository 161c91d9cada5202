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

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dabnet/errors.hpp"
#include "dabnet/rng.hpp"
#include "test_support.hpp"

namespace dabnet {
namespace {

TEST(RngTest, SeedZeroMatchesGoldenFile) {
  std::ifstream in(testing::data_dir() / "rng_seed0.txt");
  ASSERT_TRUE(in);
  std::vector<std::uint64_t> golden;
  std::string hex;
  while (in >> hex) golden.push_back(std::stoull(hex, nullptr, 16));
  ASSERT_EQ(golden.size(), 8u);
  Rng rng(0);
  for (std::uint64_t g : golden) EXPECT_EQ(rng.next_u64(), g);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(RngTest, UnitIntervalIsHalfOpen) {
  Rng rng(5);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const float u = rng.next_unit();
    ASSERT_GE(u, 0.0f);
    ASSERT_LT(u, 1.0f);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
}

TEST(RngTest, UniformBounds) {
  Rng rng(9);
  EXPECT_EQ(rng.uniform(2.0f, 2.0f), 2.0f);
  EXPECT_THROW(rng.uniform(1.0f, 0.0f), ArgumentError);
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.uniform_int(-3, 4);
    ASSERT_GE(k, -3);
    ASSERT_LE(k, 4);
  }
  EXPECT_EQ(rng.uniform_int(7, 7), 7);
}

TEST(RngTest, UniformIntHitsEveryValue) {
  Rng rng(1);
  std::vector<int> seen(6, 0);
  for (int i = 0; i < 600; ++i) ++seen[static_cast<std::size_t>(rng.uniform_int(0, 5))];
  for (int s : seen) EXPECT_GT(s, 0);
}

}  // namespace
}  // namespace dabnet
