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

#include "dabnet/network_spec.hpp"

#include <charconv>
#include <sstream>

#include "dabnet/errors.hpp"

namespace dabnet {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ArgumentError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

void DabModuleSpec::validate() const {
  if (channels < 2 || channels % 2 != 0) {
    throw ArgumentError("DAB module width must be even and positive, got " + std::to_string(channels));
  }
  if (dilation < 1) throw ArgumentError("DAB module dilation must be >= 1, got " + std::to_string(dilation));
}

void NetworkSpec::validate() const {
  if (num_classes < 1) throw ArgumentError("num_classes must be >= 1");
  if (init_channels < 1) throw ArgumentError("init_channels must be >= 1");
  if (block1_dilations.empty() || block2_dilations.empty()) {
    throw ArgumentError("DAB block dilation lists must be non-empty");
  }
  for (const auto* list : {&block1_dilations, &block2_dilations}) {
    for (std::int64_t d : *list) {
      if (d < 1) throw ArgumentError("dilation rates must be >= 1, got " + std::to_string(d));
    }
  }
  if (!(bn_epsilon > 0.0f)) throw ArgumentError("bn_epsilon must be positive");
}

void NetworkSpec::check_input(std::int64_t h, std::int64_t w) {
  if (h < kOutputStride || w < kOutputStride || h % kOutputStride != 0 || w % kOutputStride != 0) {
    throw InputShapeError("input " + std::to_string(h) + "x" + std::to_string(w) +
                          " must have height and width that are positive multiples of " +
                          std::to_string(kOutputStride));
  }
}

NetworkSpec NetworkSpec::parse_config(std::string_view text) {
  NetworkSpec spec;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "classes") {
      spec.num_classes = parse_int(value, "classes");
    } else if (key == "block1") {
      spec.block1_dilations = parse_int_list(value);
    } else if (key == "block2") {
      spec.block2_dilations = parse_int_list(value);
    } else if (key == "init_channels") {
      spec.init_channels = parse_int(value, "init_channels");
    } else if (key == "bn_epsilon") {
      try {
        spec.bn_epsilon = std::stof(std::string(value));
      } catch (const std::exception&) {
        throw ArgumentError("cannot parse bn_epsilon from '" + std::string(value) + "'");
      }
    } else {
      throw ArgumentError("config line " + std::to_string(line_no) + ": unknown key '" +
                          std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string NetworkSpec::to_config() const {
  std::ostringstream out;
  out << "classes=" << num_classes << '\n'
      << "init_channels=" << init_channels << '\n'
      << "block1=" << join(block1_dilations) << '\n'
      << "block2=" << join(block2_dilations) << '\n'
      << "bn_epsilon=" << bn_epsilon << '\n';
  return out.str();
}

std::vector<std::int64_t> parse_int_list(std::string_view text) {
  std::vector<std::int64_t> out;
  text = trim(text);
  if (text.empty()) throw ArgumentError("empty integer list");
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_int(text.substr(0, comma), "list element"));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

Size2 parse_size(std::string_view text) {
  text = trim(text);
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw ArgumentError("size must look like HxW, got '" + std::string(text) + "'");
  return {parse_int(text.substr(0, x), "height"), parse_int(text.substr(x + 1), "width")};
}

}  // namespace dabnet
