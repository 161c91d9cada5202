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

#include "dabnet_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "dabnet/analysis.hpp"
#include "dabnet/dab_net.hpp"
#include "dabnet/errors.hpp"
#include "dabnet/metrics.hpp"
#include "dabnet/model_io.hpp"
#include "dabnet/netpbm.hpp"
#include "dabnet/selftest.hpp"

namespace dabnet::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string weights;
  std::string input;
  std::string output;
  std::string logits;
  std::vector<std::string> sizes;
  std::string config;
  std::optional<std::int64_t> classes;
  std::string block1;
  std::string block2;
  std::string mean = "0,0,0";
  std::int32_t ignore = kDefaultIgnoreLabel;
  int iters = 100;
  int warmup = 10;
  bool csv = false;
  std::uint64_t seed = 0;
  std::string pred;
  std::string gt;
};

NetworkSpec network_spec(const Options& o) {
  NetworkSpec spec;
  if (!o.config.empty()) {
    const auto bytes = read_file(o.config);
    spec = NetworkSpec::parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  }
  if (o.classes) spec.num_classes = *o.classes;
  if (!o.block1.empty()) spec.block1_dilations = parse_int_list(o.block1);
  if (!o.block2.empty()) spec.block2_dilations = parse_int_list(o.block2);
  spec.validate();
  return spec;
}

std::array<float, 3> parse_mean(const std::string& text) {
  std::array<float, 3> out{};
  std::stringstream ss(text);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i == 3) break;
    std::size_t used = 0;
    try {
      out[i] = std::stof(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ArgumentError("--mean: '" + item + "' is not a number");
    ++i;
  }
  if (i != 3 || std::getline(ss, item, ',')) throw ArgumentError("--mean expects three values r,g,b");
  return out;
}

std::vector<Size2> sizes(const Options& o) {
  std::vector<Size2> out;
  for (const std::string& s : o.sizes) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_size(item));
  }
  if (out.empty()) out.push_back({512, 1024});
  return out;
}

WeightStore weights_or_random(const Options& o, const NetworkSpec& spec) {
  if (o.weights.empty()) return init_random_weights(spec, o.seed);
  return load_weights(o.weights, spec);
}

void print(const ReportTable& table, bool csv, std::ostream& out) {
  if (csv) {
    table.write_csv(out);
  } else {
    table.write_text(out);
  }
}

int cmd_infer(const Options& o, std::ostream& out) {
  if (o.weights.empty() || o.input.empty() || o.output.empty()) {
    throw ArgumentError("infer needs --weights, --input and --output");
  }
  const NetworkSpec spec = network_spec(o);
  const WeightStore weights = load_weights(o.weights, spec);
  const Tensor image = preprocess(load_image_ppm(o.input), parse_mean(o.mean));
  const Tensor logits = dabnet_forward(image, spec, weights);
  const LabelMap labels = predict_labels(logits);
  save_labels_pgm(labels, o.output);
  if (!o.logits.empty()) save_tensor(logits, o.logits);
  out << "wrote " << o.output << " (" << labels.w << "x" << labels.h << ", " << spec.num_classes
      << " classes)\n";
  return 0;
}

int cmd_params(const Options& o, std::ostream& out) {
  const NetworkSpec spec = network_spec(o);
  const AnalysisReport report = count_params(spec);
  print(params_table(report), o.csv, out);
  if (!o.csv) out << "total params " << report.total << '\n';
  if (!o.weights.empty()) {
    const std::int64_t stored = count_store_params(load_weights(o.weights, spec));
    if (!o.csv) out << "weight file params " << stored << '\n';
    if (stored != report.total) throw DataError("weight file holds " + std::to_string(stored) + " parameters");
  }
  return 0;
}

int cmd_flops(const Options& o, std::ostream& out) {
  const NetworkSpec spec = network_spec(o);
  for (const Size2 hw : sizes(o)) {
    NetworkSpec::check_input(hw.h, hw.w);
    const AnalysisReport report = count_macs(spec, hw);
    print(macs_table(report), o.csv, out);
    if (!o.csv) {
      out << "input " << hw.h << "x" << hw.w << ": total MACs " << report.total << ", GFLOPs " << std::fixed
          << std::setprecision(3) << 2.0 * static_cast<double>(report.total) / 1e9 << '\n'
          << std::defaultfloat;
    }
  }
  return 0;
}

int cmd_rf(const Options& o, std::ostream& out) {
  const AnalysisReport report = receptive_field(network_spec(o));
  print(receptive_field_table(report), o.csv, out);
  if (!o.csv) out << "receptive field " << report.total << '\n';
  return 0;
}

int cmd_bench(const Options& o, std::ostream& out) {
  if (o.iters < 1 || o.warmup < 0) throw ArgumentError("--iters must be >= 1 and --warmup >= 0");
  const NetworkSpec spec = network_spec(o);
  const WeightStore weights = weights_or_random(o, spec);
  std::vector<BenchReport> reports;
  for (const Size2 hw : sizes(o)) reports.push_back(benchmark(spec, weights, hw, o.warmup, o.iters));
  print(bench_table(reports), o.csv, out);
  return 0;
}

std::map<std::string, fs::path> pgm_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir + "' is not a directory");
  std::map<std::string, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.emplace(entry.path().filename().string(), entry.path());
    }
  }
  return files;
}

int cmd_eval(const Options& o, std::ostream& out) {
  if (o.pred.empty() || o.gt.empty()) throw ArgumentError("eval needs --pred DIR and --gt DIR");
  const std::int64_t classes = network_spec(o).num_classes;
  const auto preds = pgm_files(o.pred);
  const auto gts = pgm_files(o.gt);
  for (const auto& [name, path] : gts) {
    if (!preds.contains(name)) throw DataError("no prediction for ground truth '" + name + "'");
  }
  for (const auto& [name, path] : preds) {
    if (!gts.contains(name)) throw DataError("no ground truth for prediction '" + name + "'");
  }
  if (gts.empty()) throw DataError("no .pgm files in '" + o.gt + "'");

  ConfusionMatrix cm(classes);
  for (const auto& [name, path] : gts) {
    try {
      cm.accumulate(load_labels_pgm(path), load_labels_pgm(preds.at(name)), o.ignore);
    } catch (const Error& e) {
      throw DataError(name + ": " + e.what());
    }
  }
  const auto ious = iou_per_class(cm);
  ReportTable table{{"class", "iou"}, {}};
  for (std::size_t c = 0; c < ious.size(); ++c) {
    std::ostringstream v;
    if (ious[c]) {
      v << std::fixed << std::setprecision(2) << 100.0 * *ious[c];
    } else {
      v << "n/a";
    }
    table.rows.push_back({std::to_string(c), v.str()});
  }
  print(table, o.csv, out);
  out << "images " << gts.size() << '\n';
  out << "mIoU " << std::fixed << std::setprecision(2) << 100.0 * mean_iou(cm) << '\n' << std::defaultfloat;
  return 0;
}

int cmd_selftest(const Options& o, std::ostream& out) {
  bool ok = true;
  selftest::run_all(o.seed, 200, [&](const selftest::CheckResult& r) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases, " << std::fixed
        << std::setprecision(2) << r.seconds << " s)" << std::defaultfloat << '\n';
    if (!r.passed()) {
      out << "  " << r.failures << " failing; first: " << r.first_failure << '\n';
      ok = false;
    }
  });
  out << (ok ? "selftest passed" : "selftest FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"DABNet inference and analysis toolkit", "dabnet"};
  app.require_subcommand(1, 1);
  Options o;

  auto network_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "key=value network description");
    cmd->add_option("--classes", o.classes, "number of classes (default 19)");
    cmd->add_option("--block1", o.block1, "block 1 dilations, e.g. 2,2,2");
    cmd->add_option("--block2", o.block2, "block 2 dilations, e.g. 4,4,8,8,16,16");
  };

  CLI::App* infer = app.add_subcommand("infer", "segment one PPM image");
  network_flags(infer);
  infer->add_option("--weights", o.weights, ".dabw weight file")->required();
  infer->add_option("--input", o.input, "input image (binary PPM)")->required();
  infer->add_option("--output", o.output, "output label map (binary PGM)")->required();
  infer->add_option("--logits", o.logits, "also write raw logits (.tns)");
  infer->add_option("--mean", o.mean, "per-channel mean r,g,b on the [0,1] scale");

  CLI::App* params = app.add_subcommand("params", "per-layer parameter counts");
  network_flags(params);
  params->add_option("--weights", o.weights, "cross-check against a weight file");
  params->add_flag("--csv", o.csv, "CSV output");

  CLI::App* flops = app.add_subcommand("flops", "per-layer multiply-accumulates");
  network_flags(flops);
  flops->add_option("--size", o.sizes, "input HxW (default 512x1024); repeatable");
  flops->add_flag("--csv", o.csv, "CSV output");

  CLI::App* rf = app.add_subcommand("rf", "receptive field after each layer");
  network_flags(rf);
  rf->add_flag("--csv", o.csv, "CSV output");

  CLI::App* bench = app.add_subcommand("bench", "time forward passes");
  network_flags(bench);
  bench->add_option("--weights", o.weights, ".dabw weight file (random weights when omitted)");
  bench->add_option("--size", o.sizes, "input HxW (default 512x1024); repeatable or comma separated");
  bench->add_option("--iters", o.iters, "timed iterations")->capture_default_str();
  bench->add_option("--warmup", o.warmup, "untimed warm-up iterations")->capture_default_str();
  bench->add_option("--seed", o.seed, "seed for random weights")->capture_default_str();
  bench->add_flag("--csv", o.csv, "CSV output");

  CLI::App* eval = app.add_subcommand("eval", "mIoU of prediction PGMs against ground truth");
  network_flags(eval);
  eval->add_option("--pred", o.pred, "directory of predicted label maps")->required();
  eval->add_option("--gt", o.gt, "directory of ground-truth label maps")->required();
  eval->add_option("--ignore", o.ignore, "ground-truth label to skip")->capture_default_str();
  eval->add_flag("--csv", o.csv, "CSV per-class table");

  CLI::App* self = app.add_subcommand("selftest", "fast kernels vs oracle and invariants");
  self->add_option("--seed", o.seed, "random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (infer->parsed()) return cmd_infer(o, out);
    if (params->parsed()) return cmd_params(o, out);
    if (flops->parsed()) return cmd_flops(o, out);
    if (rf->parsed()) return cmd_rf(o, out);
    if (bench->parsed()) return cmd_bench(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (self->parsed()) return cmd_selftest(o, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"dabnet"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dabnet::cli
