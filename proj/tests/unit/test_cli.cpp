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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "report.hpp"
#include "speclab/error.hpp"

#ifndef SPECLAB_TEST_DATA
#define SPECLAB_TEST_DATA "tests/data"
#endif

using namespace speclab;
using namespace speclab::cli;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string temp_prefix(const std::string& stem) {
  return (std::filesystem::temp_directory_path() / ("speclab_cli_" + stem)).string();
}

}  // namespace

TEST_CASE("complex and test function parsing") {
  CHECK(parse_complex("2") == std::complex<double>(2.0, 0.0));
  CHECK(parse_complex("-0.5") == std::complex<double>(-0.5, 0.0));
  CHECK(parse_complex("0.5i") == std::complex<double>(0.0, 0.5));
  CHECK(parse_complex("-i") == std::complex<double>(0.0, -1.0));
  CHECK(parse_complex("1+2i") == std::complex<double>(1.0, 2.0));
  CHECK(parse_complex("3-0.25i") == std::complex<double>(3.0, -0.25));
  CHECK(parse_complex("1e-3-2e+1i") == std::complex<double>(1e-3, -20.0));
  CHECK_THROWS_AS(parse_complex("1+x"), Error);
  CHECK_THROWS_AS(parse_complex(""), Error);

  CHECK(std::holds_alternative<testfn::Q>(parse_function("Q")));
  CHECK(std::get<testfn::Gk>(parse_function("Gk:4")).k == 4);
  CHECK(std::get<testfn::L>(parse_function("L:2,1-i")).beta == std::complex<double>(1.0, -1.0));
  CHECK(std::get<testfn::Ltrunc>(parse_function("Ltrunc:2,1,8")).k == 8);
  CHECK(std::get<testfn::Indicator>(parse_function("Indicator:0,0.5")).hi == 0.5);
  CHECK_THROWS_AS(parse_function("Gk"), Error);
  CHECK_THROWS_AS(parse_function("Gk:0"), Error);
  CHECK_THROWS_AS(parse_function("Ialpha:0.5i"), Error);
  CHECK_THROWS_AS(parse_function("Nope"), Error);

  const auto g = parse_grid("0:1:5");
  REQUIRE(g.size() == 5);
  CHECK(g[2] == 0.5);
  CHECK_THROWS_AS(parse_grid("0:1"), Error);
  CHECK_THROWS_AS(parse_grid("1:0:5"), Error);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_short(1.0) == "1.0");
  CHECK(format_short(0.1) == "0.1");
  CHECK(format_short(-2.5e-20) == "-2.5e-20");
}

TEST_CASE("cli examples") {
  const auto lim = call({"ratio-limit", "--alphas", "2", "--betas", "1"});
  CHECK(lim.code == 0);
  CHECK(lim.out == "1.0\n");

  const auto ds = call({"ds-check", "--n", "10", "--jmax", "5", "--samples", "100000", "--seed", "1", "--format", "json"});
  REQUIRE(ds.code == 0);
  const auto j = json::parse(ds.out);
  CHECK(j.at("checks").size() == 6);
  CHECK(j.at("pass").get<bool>());

  const auto path = temp_prefix("three.txt");
  {
    std::ofstream f(path, std::ios::binary);
    f << "14.134725142\n21.022039639\n25.010857580\n";
  }
  const auto ing = call({"zeta-ingest", "--format", "plain", "--in", path});
  CHECK(ing.code == 0);
  const auto prefix = temp_prefix("ingest");
  REQUIRE(call({"zeta-ingest", "--in", path, "--out", prefix}).code == 0);
  const auto summary = json::parse(slurp(prefix + ".json"));
  CHECK(summary.at("constants").at("count") == 3);
  CHECK(summary.at("config").at("format") == "plain");
  std::filesystem::remove(path);
  std::filesystem::remove(prefix + ".json");
  std::filesystem::remove(prefix + ".csv");
}

TEST_CASE("cli errors name the offending token") {
  const auto unknown = call({"no-such-command"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("no-such-command") != std::string::npos);

  const auto flag = call({"ds-check", "--bogus-flag", "3"});
  CHECK(flag.code == 2);
  CHECK(flag.err.find("--bogus-flag") != std::string::npos);

  const auto path = call({"zeta-ingest", "--in", "/nonexistent/zeros.txt"});
  CHECK(path.code == 2);
  CHECK(path.err.find("/nonexistent/zeros.txt") != std::string::npos);

  const auto value = call({"ratio-limit", "--alphas", "2", "--betas", "1+x"});
  CHECK(value.code == 2);
  CHECK(value.err.find("1+x") != std::string::npos);

  const auto domain = call({"ratio-limit", "--alphas", "2", "--betas", "0"});
  CHECK(domain.code == 2);

  const auto fn = call({"cue-tail", "--fn", "Gk:zero", "--samples", "10"});
  CHECK(fn.code == 2);
  CHECK(fn.err.find("zero") != std::string::npos);

  CHECK(call({"--replay", "/nonexistent/summary.json"}).code == 2);
}

TEST_CASE("help for every subcommand") {
  const std::vector<std::string> subs{"cue-tail",   "cue-moments",      "ds-check",     "ratio-finite",
                                      "ratio-limit", "ratio-mc",        "sine-corr",    "logderiv-id",
                                      "zeta-ingest", "zeta-locate",     "explicit-formula", "zeta-tail",
                                      "zeta-count-tail", "zeta-ratio",  "zeta-logderiv-tail", "pair-corr"};
  for (const auto& s : subs) {
    CAPTURE(s);
    const auto h = call({s, "--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("Usage") != std::string::npos);
  }
  const auto top = call({"--help"});
  CHECK(top.code == 0);
  for (const auto& s : subs) CHECK(top.out.find(s) != std::string::npos);
  const auto mc = call({"ratio-mc", "--help"});
  for (const char* flag : {"--alphas", "--betas", "--n", "--samples", "--seed", "--workers", "--out", "--format"}) {
    CHECK(mc.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("emit round trip and LF endings") {
  const auto prefix = temp_prefix("explicit");
  const auto r = call({"explicit-formula", "--table", std::string(SPECLAB_TEST_DATA) + "/zeta_zeros_first200.txt",
                       "--out", prefix, "--format", "csv"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(prefix + ".csv");
  CHECK(csv == r.out);
  CHECK(csv.find('\r') == std::string::npos);
  std::istringstream in(csv);
  const auto rows = parse_csv(in);
  REQUIRE(rows.size() == 15);
  // Function names contain commas, so they are quoted and must survive.
  CHECK(rows[0].key == "bspline(m=6,h=0.5,c=0,w=1)");
  const auto summary = json::parse(slurp(prefix + ".json"));
  const auto& fns = summary.at("constants").at("functions");
  CHECK(rows[0].value == fns[0].at("zero_side").get<double>());
  CHECK(rows[2].value == fns[0].at("residual").get<double>());
  CHECK(rows[3].value == fns[1].at("zero_side").get<double>());
  std::filesystem::remove(prefix + ".csv");
  std::filesystem::remove(prefix + ".json");

  Report rep;
  rep.subcommand = "demo";
  rep.add("demo", "x", 0.1, 1e-300);
  rep.add("demo", "quote\"and,comma", -3.0);
  std::ostringstream out;
  emit(rep, Format::csv, out);
  std::istringstream back(out.str());
  const auto parsed = parse_csv(back);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].value == 0.1);
  CHECK(parsed[0].stderr_ == 1e-300);
  CHECK(parsed[1].key == "quote\"and,comma");
}

TEST_CASE("worker count and replay reproduce outputs") {
  const std::vector<std::string> base{"cue-tail", "--n", "20", "--samples", "3000", "--seed", "5", "--grid", "0:6:13",
                                      "--format", "csv"};
  auto one = base, three = base;
  one.insert(one.end(), {"--workers", "1"});
  three.insert(three.end(), {"--workers", "3"});
  const auto a = call(one), b = call(three);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const auto prefix = temp_prefix("moments");
  REQUIRE(call({"cue-moments", "--n", "8", "--samples", "2000", "--fn", "Ialpha:1+0.5i", "--out", prefix}).code == 0);
  const auto replay = call({"--replay", prefix + ".json", "--format", "csv"});
  REQUIRE(replay.code == 0);
  CHECK(replay.out == slurp(prefix + ".csv"));
  std::filesystem::remove(prefix + ".csv");
  std::filesystem::remove(prefix + ".json");

  const auto r1 = call({"ratio-mc", "--alphas", "1,3", "--betas", "2,-1", "--n", "6", "--samples", "4000",
                        "--workers", "1", "--format", "csv"});
  const auto r2 = call({"ratio-mc", "--alphas", "1", "3", "--betas", "2", "-1", "--n", "6", "--samples", "4000",
                        "--workers", "2", "--format", "csv"});
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
}
