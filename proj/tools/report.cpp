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

#include "report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "speclab/error.hpp"

namespace speclab::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc{} && p == s.data() + s.size(), ErrorKind::validation, "csv: bad number '" + s + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

void Report::add(const std::string& experiment, const std::string& key, double value, double se) {
  rows.push_back({experiment, key, value, se});
}

void Report::check(const std::string& name, bool ok, json detail) {
  detail["pass"] = ok;
  checks[name] = std::move(detail);
}

bool Report::pass() const {
  for (const auto& [k, v] : checks.items()) {
    if (!v.at("pass").get<bool>()) return false;
  }
  return true;
}

std::string Report::param_hash() const {
  // FNV-1a over the canonical config text; the worker count does not change results.
  json c = config;
  c.erase("workers");
  const std::string text = subcommand + c.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, p);
}

std::string format_short(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

json summary(const Report& r) {
  json j;
  j["subcommand"] = r.subcommand;
  j["param_hash"] = r.param_hash();
  j["config"] = r.config;
  j["constants"] = r.constants;
  j["checks"] = r.checks;
  j["pass"] = r.pass();
  j["rows"] = r.rows.size();
  return j;
}

void emit(const Report& r, Format f, std::ostream& out) {
  switch (f) {
    case Format::text:
      for (const auto& l : r.lines) out << l << '\n';
      for (const auto& [k, v] : r.checks.items()) out << (v.at("pass").get<bool>() ? "pass " : "FAIL ") << k << '\n';
      break;
    case Format::csv: {
      const std::string hash = r.param_hash();
      out << "experiment,param-hash,x-or-key,value,stderr\n";
      for (const auto& row : r.rows) {
        out << csv_field(row.experiment) << ',' << hash << ',' << csv_field(row.key) << ','
            << format_double(row.value) << ',' << format_double(row.stderr_) << '\n';
      }
      break;
    }
    case Format::json:
      out << summary(r).dump(2) << '\n';
      break;
  }
}

void write_files(const Report& r, const std::string& prefix) {
  for (const auto& [ext, fmt] : {std::pair{".csv", Format::csv}, std::pair{".json", Format::json}}) {
    const std::string path = prefix + ext;
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorKind::io, "cannot write " + path);
    emit(r, fmt, f);
    f.flush();
    require(static_cast<bool>(f), ErrorKind::io, "write failed: " + path);
  }
}

std::vector<Row> parse_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::validation, "csv: missing header");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    require(f.size() == 5, ErrorKind::validation, "csv: expected 5 fields in '" + line + "'");
    rows.push_back({f[0], f[2], parse_number(f[3]), parse_number(f[4])});
  }
  return rows;
}

}  // namespace speclab::cli
