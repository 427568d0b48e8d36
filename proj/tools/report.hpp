// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace speclab::cli {

using json = nlohmann::ordered_json;

struct Row {
  std::string experiment;
  std::string key;  // grid point or named quantity
  double value = 0.0;
  double stderr_ = 0.0;  // 0 for deterministic values
};

struct Report {
  std::string subcommand;
  json config = json::object();     // resolved flags, replayable
  json constants = json::object();  // measured quantities
  json checks = json::object();     // name -> {pass, ...}
  std::vector<Row> rows;
  std::vector<std::string> lines;  // human-readable stdout summary

  void add(const std::string& experiment, const std::string& key, double value, double stderr_ = 0.0);
  void check(const std::string& name, bool pass, json detail = json::object());
  bool pass() const;
  std::string param_hash() const;
};

enum class Format { text, csv, json };

/// %.17g, the locale-independent way.
std::string format_double(double v);
/// Shortest round-trip form with a trailing ".0" on integral values.
std::string format_short(double v);

void emit(const Report& r, Format f, std::ostream& out);
/// Writes <prefix>.csv and <prefix>.json.
void write_files(const Report& r, const std::string& prefix);

json summary(const Report& r);

std::vector<Row> parse_csv(std::istream& in);

}  // namespace speclab::cli
