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

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dabnet/dab_net.hpp"
#include "dabnet/model_io.hpp"
#include "dabnet/netpbm.hpp"
#include "dabnet/rng.hpp"
#include "dabnet_cli/cli.hpp"
#include "test_support.hpp"

namespace dabnet {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"infer"}).code, 2);
  EXPECT_EQ(run({"flops", "--size", "12"}).code, 2);
  EXPECT_EQ(run({"params", "--block1", "2,x"}).code, 2);
}

TEST(CliTest, Params) {
  const Result r = run({"params"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "total params 756662"));
  const Result csv = run({"params", "--csv"});
  EXPECT_EQ(csv.out.rfind("layer,kind,output,params\n", 0), 0u);
  EXPECT_TRUE(contains(csv.out, "stage.0.conv,conv,32x256x512,864\n"));
  // An input that is not a multiple of 8 is a data error, not a usage error.
  EXPECT_EQ(run({"flops", "--size", "12x12"}).code, 1);
}

TEST(CliTest, ParamsCrossCheckWeights) {
  testing::TempDir dir;
  save_weights(init_random_weights(NetworkSpec{}, 1), dir / "w.dabw");
  const Result r = run({"params", "--weights", (dir / "w.dabw").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "weight file params 756662"));
  const Result wrong = run({"params", "--classes", "5", "--weights", (dir / "w.dabw").string()});
  EXPECT_EQ(wrong.code, 1);
}

TEST(CliTest, FlopsAndRf) {
  const Result f = run({"flops", "--size", "256x512,512x1024"});
  EXPECT_EQ(f.code, 0) << f.err;
  EXPECT_TRUE(contains(f.out, "input 256x512"));
  EXPECT_TRUE(contains(f.out, "input 512x1024"));
  const Result rf = run({"rf"});
  EXPECT_TRUE(contains(rf.out, "receptive field 1087"));
  const Result custom = run({"rf", "--block2", "1,1"});
  EXPECT_FALSE(contains(custom.out, "receptive field 1087"));
}

TEST(CliTest, InferWritesLabels) {
  testing::TempDir dir;
  const NetworkSpec spec;
  save_weights(init_random_weights(spec, 2), dir / "w.dabw");
  Rng rng(2);
  Tensor image({1, 3, 16, 24});
  fill_uniform(image, rng, 0.0f, 1.0f);
  save_image_ppm(image, dir / "in.ppm");
  const Result r = run({"infer", "--weights", (dir / "w.dabw").string(), "--input", (dir / "in.ppm").string(),
                        "--output", (dir / "out.pgm").string(), "--logits", (dir / "l.tns").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const LabelMap labels = load_labels_pgm(dir / "out.pgm");
  const Tensor logits = load_tensor(dir / "l.tns");
  EXPECT_EQ(logits.shape(), (Shape4{1, 19, 16, 24}));
  EXPECT_EQ(labels, predict_labels(logits));
  EXPECT_EQ(logits, dabnet_forward(load_image_ppm(dir / "in.ppm"), spec, load_weights(dir / "w.dabw")));

  save_image_ppm(Tensor({1, 3, 12, 16}), dir / "odd.ppm");
  EXPECT_EQ(run({"infer", "--weights", (dir / "w.dabw").string(), "--input", (dir / "odd.ppm").string(),
                 "--output", (dir / "x.pgm").string()})
                .code,
            1);
}

TEST(CliTest, EvalPerfectAndFixture) {
  testing::TempDir dir;
  std::filesystem::create_directories(dir / "pred");
  std::filesystem::create_directories(dir / "gt");
  Rng rng(3);
  for (const char* name : {"a.pgm", "b.pgm"}) {
    const LabelMap m = testing::random_labels(rng, 9, 11, 19);
    save_labels_pgm(m, dir.path() / "pred" / name);
    save_labels_pgm(m, dir.path() / "gt" / name);
  }
  const Result r = run({"eval", "--pred", (dir / "pred").string(), "--gt", (dir / "gt").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "images 2"));
  EXPECT_TRUE(contains(r.out, "mIoU 100.00"));

  std::filesystem::remove(dir.path() / "gt" / "b.pgm");
  EXPECT_EQ(run({"eval", "--pred", (dir / "pred").string(), "--gt", (dir / "gt").string()}).code, 1);
}

TEST(CliTest, BenchCsv) {
  const Result r = run({"bench", "--size", "16x16", "--iters", "2", "--warmup", "0", "--csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "16x16"));
  EXPECT_EQ(run({"bench", "--iters", "0"}).code, 2);
}

TEST(CliTest, Selftest) {
  const Result r = run({"selftest", "--seed", "9"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "selftest passed"));
  EXPECT_FALSE(contains(r.out, "FAIL "));
}

}  // namespace
}  // namespace dabnet
