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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dabnet/errors.hpp"
#include "dabnet/model_io.hpp"
#include "dabnet/netpbm.hpp"
#include "dabnet/rng.hpp"
#include "test_support.hpp"

namespace dabnet {
namespace {

using namespace std::string_literals;

std::vector<std::byte> bytes_of(const std::string& s) {
  std::vector<std::byte> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = static_cast<std::byte>(s[i]);
  return out;
}

TEST(PgmTest, GoldenFixture) {
  const LabelMap m = load_labels_pgm(testing::data_dir() / "golden.pgm");
  EXPECT_EQ(m.n, 1);
  EXPECT_EQ(m.h, 3);
  EXPECT_EQ(m.w, 4);
  EXPECT_EQ(m.at(0, 1, 2), 6);
  EXPECT_EQ(m.at(0, 2, 3), 255);
}

TEST(PgmTest, RoundTripProperty) {
  Rng rng(17);
  testing::TempDir dir;
  for (int i = 0; i < 40; ++i) {
    const LabelMap m = testing::random_labels(rng, rng.uniform_int(1, 30), rng.uniform_int(1, 30), 256);
    EXPECT_EQ(decode_pgm(encode_pgm(m)), m);
    if (i % 10 == 0) {
      save_labels_pgm(m, dir / "m.pgm");
      EXPECT_EQ(load_labels_pgm(dir / "m.pgm"), m);
    }
  }
}

TEST(PgmTest, Rejections) {
  EXPECT_THROW(decode_pgm(bytes_of("P2\n1 1\n255\n0\n"s)), UnsupportedFormatError);
  EXPECT_THROW(decode_pgm(bytes_of("P5\n1 1\n65535\n\0\0"s)), UnsupportedFormatError);
  EXPECT_THROW(decode_pgm(bytes_of("P5\n2 2\n255\n\1\1\1"s)), TruncationError);
  EXPECT_THROW(decode_pgm(bytes_of("P5\n2"s)), FormatError);
  EXPECT_THROW(decode_pgm(bytes_of("GIF89a"s)), FormatError);
  LabelMap m(1, 1, 2);
  m.labels = {0, 256};
  EXPECT_THROW(encode_pgm(m), DataError);
  EXPECT_THROW(encode_pgm(LabelMap(2, 1, 1)), ShapeError);
}

TEST(PpmTest, GoldenFixture) {
  const Tensor t = load_image_ppm(testing::data_dir() / "golden.ppm");
  EXPECT_EQ(t.shape(), (Shape4{1, 3, 1, 2}));
  EXPECT_EQ(t.at(0, 0, 0, 0), 1.0f);
  EXPECT_EQ(t.at(0, 1, 0, 1), 128.0f / 255.0f);
  EXPECT_EQ(t.at(0, 2, 0, 1), 1.0f);
  EXPECT_EQ(encode_ppm(t), read_file(testing::data_dir() / "golden.ppm"));
}

TEST(PpmTest, CommentsAndRoundTrip) {
  const Tensor t = decode_ppm(bytes_of("P6 # c\n1\t1 # d\n255\n\xff\x00\x7f"s));
  EXPECT_EQ(t.at(0, 2, 0, 0), 127.0f / 255.0f);
  Rng rng(1);
  Tensor img({1, 3, 5, 7});
  fill_uniform(img, rng, 0.0f, 1.0f);
  const Tensor once = decode_ppm(encode_ppm(img));
  EXPECT_EQ(decode_ppm(encode_ppm(once)), once);
  EXPECT_THROW(decode_ppm(bytes_of("P3\n1 1\n255\n0 0 0\n"s)), UnsupportedFormatError);
  EXPECT_THROW(encode_ppm(Tensor({1, 1, 2, 2})), ShapeError);
}

}  // namespace
}  // namespace dabnet
