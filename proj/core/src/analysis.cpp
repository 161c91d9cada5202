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

#include "dabnet/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "dabnet/checksum.hpp"
#include "dabnet/dab_net.hpp"
#include "dabnet/errors.hpp"
#include "dabnet/rng.hpp"

namespace dabnet {
namespace {

LayerReport to_report(const LayerRecord& r) {
  return {r.name, r.kind, r.output, r.params, r.macs, r.receptive_field(), r.jump};
}

std::string shape_text(const Shape4& s) {
  return std::to_string(s.c) + "x" + std::to_string(s.h) + "x" + std::to_string(s.w);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

AnalysisReport count_params(const NetworkSpec& spec) {
  const NetworkPlan plan = build_plan(spec);
  AnalysisReport report;
  for (const LayerRecord& r : plan.layers) {
    if (r.params == 0) continue;
    report.layers.push_back(to_report(r));
    report.total += r.params;
  }
  return report;
}

AnalysisReport count_macs(const NetworkSpec& spec, Size2 input) {
  const NetworkPlan plan = build_plan(spec, input);
  AnalysisReport report;
  for (const LayerRecord& r : plan.layers) {
    if (r.kind != LayerKind::kConv) continue;
    report.layers.push_back(to_report(r));
    report.total += r.macs;
  }
  return report;
}

AnalysisReport receptive_field(const NetworkSpec& spec) {
  const NetworkPlan plan = build_plan(spec);
  AnalysisReport report;
  for (const LayerRecord& r : plan.layers) {
    if (!r.main_path) continue;
    switch (r.kind) {
      case LayerKind::kConv:
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool:
      case LayerKind::kConcat:
      case LayerKind::kAdd:
        report.layers.push_back(to_report(r));
        report.total = r.receptive_field();
        break;
      default:
        break;
    }
  }
  return report;
}

std::int64_t count_store_params(const WeightStore& store) {
  std::int64_t total = 0;
  for (const auto& [name, t] : store) {
    if (ends_with(name, ".bn.mean") || ends_with(name, ".bn.var")) continue;
    total += static_cast<std::int64_t>(t.size());
  }
  return total;
}

BenchReport benchmark(const NetworkSpec& spec, const WeightStore& weights, Size2 input, int warmup,
                      int iterations) {
  if (iterations < 1) throw ArgumentError("benchmark needs at least one timed iteration");
  if (warmup < 0) throw ArgumentError("benchmark warmup must be >= 0");
  NetworkSpec::check_input(input.h, input.w);

  Tensor image({1, NetworkSpec::kImageChannels, input.h, input.w});
  Rng rng(0);
  fill_uniform(image, rng, 0.0f, 1.0f);

  for (int i = 0; i < warmup; ++i) (void)dabnet_forward(image, spec, weights);

  BenchReport report;
  report.resolution = input;
  report.warmup = warmup;
  report.iterations = iterations;
  report.samples_ms.reserve(static_cast<std::size_t>(iterations));
  Tensor logits;
  for (int i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    logits = dabnet_forward(image, spec, weights);
    const auto stop = std::chrono::steady_clock::now();
    report.samples_ms.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  double sum = 0.0;
  for (double s : report.samples_ms) sum += s;
  report.mean_ms = sum / static_cast<double>(iterations);
  report.fps = report.mean_ms > 0.0 ? 1000.0 / report.mean_ms : 0.0;
  report.logits_checksum = fnv1a64(std::as_bytes(logits.values()));
  return report;
}

void ReportTable::write_text(std::ostream& out) const {
  std::vector<std::size_t> width(headers.size(), 0);
  for (std::size_t i = 0; i < headers.size(); ++i) width[i] = headers[i].size();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      // First column left-aligned, numbers right-aligned.
      const std::size_t pad = width[i] - cells[i].size();
      if (i == 0) {
        out << cells[i] << std::string(pad, ' ');
      } else {
        out << "  " << std::string(pad, ' ') << cells[i];
      }
    }
    out << '\n';
  };
  line(headers);
  std::size_t total = 0;
  for (std::size_t w : width) total += w + 2;
  out << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
  for (const auto& row : rows) line(row);
}

void ReportTable::write_csv(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(headers);
  for (const auto& row : rows) line(row);
}

ReportTable params_table(const AnalysisReport& report) {
  ReportTable t{{"layer", "kind", "output", "params"}, {}};
  for (const auto& l : report.layers) {
    t.rows.push_back({l.name, std::string(to_string(l.kind)), shape_text(l.output), std::to_string(l.params)});
  }
  return t;
}

ReportTable macs_table(const AnalysisReport& report) {
  ReportTable t{{"layer", "output", "macs"}, {}};
  for (const auto& l : report.layers) {
    t.rows.push_back({l.name, shape_text(l.output), std::to_string(l.macs)});
  }
  return t;
}

ReportTable receptive_field_table(const AnalysisReport& report) {
  ReportTable t{{"layer", "kind", "rf", "jump"}, {}};
  for (const auto& l : report.layers) {
    t.rows.push_back({l.name, std::string(to_string(l.kind)), std::to_string(l.receptive_field),
                      std::to_string(l.jump)});
  }
  return t;
}

ReportTable bench_table(const std::vector<BenchReport>& reports) {
  ReportTable t{{"resolution", "warmup", "iterations", "mean_ms", "fps"}, {}};
  for (const auto& r : reports) {
    t.rows.push_back({std::to_string(r.resolution.h) + "x" + std::to_string(r.resolution.w),
                      std::to_string(r.warmup), std::to_string(r.iterations), fixed(r.mean_ms, 3),
                      fixed(r.fps, 2)});
  }
  return t;
}

}  // namespace dabnet
