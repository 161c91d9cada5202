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

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dabnet/checksum.hpp"
#include "dabnet/dab_net.hpp"
#include "dabnet/errors.hpp"
#include "dabnet/model_io.hpp"
#include "dabnet/rng.hpp"
#include "test_support.hpp"

namespace dabnet {
namespace {

std::uint32_t bits(float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, sizeof u);
  return u;
}

bool bit_equal(const WeightStore& a, const WeightStore& b) {
  if (a.size() != b.size()) return false;
  auto ib = b.begin();
  for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.shape() != ib->second.shape()) return false;
    const auto va = ia->second.values(), vb = ib->second.values();
    for (std::size_t i = 0; i < va.size(); ++i) {
      if (bits(va[i]) != bits(vb[i])) return false;
    }
  }
  return true;
}

TEST(GoldenTest, ChecksumsMatch) {
  for (const auto& [name, expected] : testing::golden_checksums()) {
    EXPECT_EQ(fnv1a64(read_file(testing::data_dir() / name)), expected) << name;
  }
}

TEST(GoldenTest, DecodesWeights) {
  const WeightStore w = load_weights(testing::data_dir() / "golden.dabw");
  ASSERT_EQ(w.size(), 2u);
  const Tensor& conv = w.get("conv.weight");
  EXPECT_EQ(conv.shape(), (Shape4{2, 1, 1, 3}));
  EXPECT_EQ(conv.values()[2], 2.0f);
  EXPECT_TRUE(std::signbit(conv.values()[4]));
  EXPECT_EQ(w.get("bn.gamma").values()[2], -7.5f);
  // The writer reproduces the fixture byte for byte.
  EXPECT_EQ(encode_weights(w), read_file(testing::data_dir() / "golden.dabw"));
}

TEST(GoldenTest, ShortShapesArePadded) {
  const WeightStore w = load_weights(testing::data_dir() / "golden_1d.dabw");
  EXPECT_EQ(w.get("bias").shape(), (Shape4{2, 1, 1, 1}));
  EXPECT_EQ(w.get("bias").values()[1], -2.5f);
}

TEST(GoldenTest, DecodesTensor) {
  const Tensor t = load_tensor(testing::data_dir() / "golden.tns");
  EXPECT_EQ(t.shape(), (Shape4{1, 2, 2, 2}));
  EXPECT_EQ(t.at(0, 1, 1, 1), 0.75f);
  EXPECT_EQ(encode_tensor(t), read_file(testing::data_dir() / "golden.tns"));
}

TEST(DabwTest, RoundTripIsBitExact) {
  Rng rng(13);
  for (int i = 0; i < 30; ++i) {
    WeightStore store;
    const auto records = rng.uniform_int(0, 6);
    for (std::int64_t r = 0; r < records; ++r) {
      Tensor t({rng.uniform_int(1, 4), rng.uniform_int(1, 4), rng.uniform_int(1, 3), rng.uniform_int(1, 3)});
      for (float& v : t.values()) {
        const std::uint64_t raw = rng.next_u64();
        const auto u = static_cast<std::uint32_t>(raw);
        std::memcpy(&v, &u, sizeof v);  // any bit pattern, NaNs included
      }
      store.insert("w" + std::to_string(r) + (r % 2 ? ".\xc3\xa9" : ""), std::move(t));
    }
    EXPECT_TRUE(bit_equal(decode_weights(encode_weights(store)), store));
  }
}

TEST(DabwTest, FileRoundTripWithSpec) {
  testing::TempDir dir;
  const NetworkSpec spec;
  const WeightStore w = init_random_weights(spec, 6);
  save_weights(w, dir / "w.dabw");
  EXPECT_EQ(load_weights(dir / "w.dabw", spec), w);
  NetworkSpec other = spec;
  other.num_classes = 5;
  EXPECT_THROW(load_weights(dir / "w.dabw", other), WeightStoreError);
  EXPECT_THROW(load_weights(dir / "missing.dabw"), IoError);
}

TEST(DabwTest, EveryTruncationIsReported) {
  const auto bytes = read_file(testing::data_dir() / "golden.dabw");
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    EXPECT_THROW(decode_weights(std::span(bytes).first(n)), FormatError) << "length " << n;
  }
  try {
    decode_weights(std::span(bytes).first(10));
    FAIL();
  } catch (const TruncationError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
}

TEST(DabwTest, Corruption) {
  auto bytes = read_file(testing::data_dir() / "golden.dabw");
  auto bad = bytes;
  bad[0] = std::byte{'X'};
  EXPECT_THROW(decode_weights(bad), FormatError);
  bad = bytes;
  bad[4] = std::byte{2};
  EXPECT_THROW(decode_weights(bad), FormatError);
  bad = bytes;
  bad.push_back(std::byte{0});
  EXPECT_THROW(decode_weights(bad), FormatError);
  // dtype byte of the first record follows magic, version, count, u16 and the
  // 11-byte name.
  bad = bytes;
  bad[12 + 2 + 11] = std::byte{1};
  EXPECT_THROW(decode_weights(bad), FormatError);
}

TEST(DabwTest, DuplicateNamesRejected) {
  WeightStore w;
  w.insert("a", Tensor({1, 1, 1, 1}));
  EXPECT_THROW(w.insert("a", Tensor({1, 1, 1, 1})), WeightStoreError);
  EXPECT_THROW(w.get("b"), WeightStoreError);
}

TEST(TnsTest, RoundTrip) {
  Rng rng(2);
  Tensor t({2, 3, 4, 5});
  fill_uniform(t, rng, -10.0f, 10.0f);
  t.values()[0] = std::numeric_limits<float>::infinity();
  EXPECT_EQ(decode_tensor(encode_tensor(t)), t);
  const auto bytes = encode_tensor(t);
  EXPECT_THROW(decode_tensor(std::span(bytes).first(bytes.size() - 1)), TruncationError);
}

TEST(PreprocessTest, SubtractsMeans) {
  const Tensor img = Tensor::filled({1, 3, 1, 1}, 0.5f);
  const Tensor out = preprocess(img, {0.1f, 0.2f, 0.3f});
  EXPECT_FLOAT_EQ(out.at(0, 0, 0, 0), 0.4f);
  EXPECT_FLOAT_EQ(out.at(0, 2, 0, 0), 0.2f);
  EXPECT_THROW(preprocess(Tensor({1, 1, 1, 1}), {0, 0, 0}), ShapeError);
}

}  // namespace
}  // namespace dabnet
