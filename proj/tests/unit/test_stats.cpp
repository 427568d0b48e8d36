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

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "speclab/cue.hpp"
#include "speclab/error.hpp"
#include "speclab/rng.hpp"
#include "speclab/stats.hpp"

using namespace speclab;
using namespace speclab::stats;

namespace {

// All set partitions of {0..l-1} as restricted growth strings, tallied by block sizes.
std::map<std::vector<int>, long long> enumerate_set_partitions(int l) {
  std::map<std::vector<int>, long long> out;
  std::vector<int> a(l, 0);
  std::vector<int> mx(l, 0);
  while (true) {
    const int blocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<int> sizes(blocks, 0);
    for (const int b : a) ++sizes[b];
    std::sort(sizes.rbegin(), sizes.rend());
    ++out[sizes];
    int i = l - 1;
    while (i > 0 && a[i] == mx[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    for (int j = i + 1; j < l; ++j) a[j] = 0;
    for (int j = i; j < l; ++j) mx[j] = std::max(mx[j - 1], a[j]);
  }
  return out;
}

}  // namespace

TEST_CASE("empirical survival examples") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const std::vector<double> g{0.0, 2.0, 2.5, 3.0, 4.0};
  const auto r = empirical_survival(v, g);
  CHECK(r.survival[0] == 1.0);
  CHECK(r.survival[1] == doctest::Approx(2.0 / 3.0));
  CHECK(r.survival[2] == doctest::Approx(1.0 / 3.0));
  CHECK(r.survival[4] == 0.0);
  CHECK(r.counts[3] == 1);
  CHECK(r.samples == 3);
  CounterRng rng(1, 0);
  std::vector<double> x(1000);
  for (auto& e : x) e = rng.normal();
  const auto s = empirical_survival(x, linear_grid(-4.0, 4.0, 81));
  CHECK(std::is_sorted(s.survival.rbegin(), s.survival.rend()));
  CHECK_THROWS_AS(empirical_survival(std::vector<double>{}, g), Error);
}

TEST_CASE("fit_tail on synthetic data") {
  const long draws = 1000000;
  CounterRng rng(2, 0);
  // Inverse transform for S(x) = exp(-2 x log x) on x >= 1.
  std::vector<double> xlx(draws);
  for (auto& e : xlx) {
    const double target = -std::log(rng.uniform_pos()) / 2.0;
    std::uintmax_t it = 100;
    const auto r = boost::math::tools::bracket_and_solve_root(
        [&](double x) { return x * std::log(x) - target; }, 2.0, 2.0, true,
        boost::math::tools::eps_tolerance<double>(50), it);
    e = target == 0.0 ? 1.0 : std::max(1.0, 0.5 * (r.first + r.second));
  }
  auto rep = fit_tail(empirical_survival(xlx, linear_grid(1.0, 6.0, 101)));
  CHECK(rep.fits[0].model == TailModel::xlogx);
  CHECK(std::abs(rep.fits[0].C - 2.0) <= 0.2);
  CHECK(rep.best.model == TailModel::xlogx);
  for (const auto i : rep.window) {
    CHECK(rep.counts[i] >= kMinTailCount);
    CHECK(rep.survival[i] <= kWindowStart);
  }

  std::vector<double> half(draws);
  for (auto& e : half) e = std::abs(rng.normal());
  const auto hn = fit_tail(empirical_survival(half, linear_grid(0.0, 6.0, 121)));
  CHECK(hn.best.model == TailModel::xsquared);

  const std::vector<double> constant(1000, 3.0);
  CHECK_THROWS_AS(fit_tail(empirical_survival(constant, linear_grid(0.0, 6.0, 61))), Error);
}

TEST_CASE("moment_ci") {
  const std::vector<double> v{1.0, -2.0, 3.5};
  const auto m0 = moment_ci(v, 0);
  CHECK(m0.estimate == cplx{1.0, 0.0});
  CHECK(m0.stderr_ == 0.0);
  CounterRng rng(3, 0);
  std::vector<double> x(200000);
  for (auto& e : x) e = rng.normal();
  const auto m2 = moment_ci(x, 2);
  CHECK(std::abs(m2.estimate.real() - 1.0) <= 3.0 * m2.stderr_);
  CHECK(m2.samples == 200000);
  CHECK_THROWS_AS(moment_ci(std::vector<double>{}, 1), Error);

  // E|Tr(g^3)|^2 = 3 at n = 10.
  std::vector<cplx> tr(100000);
  for (std::size_t i = 0; i < tr.size(); ++i) tr[i] = cue::traces(cue::sample_eigenangles(10, 17, i), 3).values[2];
  const auto m = moment_ci(tr, 2);
  CHECK(std::abs(m.estimate.real() - 3.0) <= 3.0 * m.stderr_);
}

TEST_CASE("partition expansion") {
  const auto e1 = partition_expansion(1);
  REQUIRE(e1.terms.size() == 1);
  CHECK(e1.terms[0].blocks == std::vector<int>{1});
  CHECK(e1.terms[0].coefficient == 1);
  const auto e2 = partition_expansion(2);
  REQUIRE(e2.terms.size() == 2);
  CHECK(e2.terms[0].blocks == std::vector<int>{2});
  CHECK(e2.terms[1].blocks == std::vector<int>{1, 1});
  CHECK(e2.terms[0].coefficient == 1);
  CHECK(e2.terms[1].coefficient == 1);
  const auto e3 = partition_expansion(3);
  REQUIRE(e3.terms.size() == 3);
  CHECK(e3.terms[0].coefficient == 1);
  CHECK(e3.terms[1].blocks == std::vector<int>{2, 1});
  CHECK(e3.terms[1].coefficient == 3);
  CHECK(e3.terms[2].coefficient == 1);
  CHECK_THROWS_AS(partition_expansion(0), Error);
  CHECK_THROWS_AS(partition_expansion(11), Error);

  const long long bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
  for (int l = 1; l <= 10; ++l) {
    const auto e = partition_expansion(l);
    const auto brute = enumerate_set_partitions(l);
    long long total = 0;
    for (const auto& t : e.terms) {
      CHECK(brute.at(t.blocks) == t.coefficient);
      total += t.coefficient;
    }
    CHECK(total == bell[l]);
    CHECK(e.terms.size() == brute.size());
  }
}

TEST_CASE("property: expansion reproduces the power of a linear statistic") {
  CounterRng rng(4, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int size = 1 + trial % 5;
    std::vector<double> eta(size);
    // Small integers keep every product exact.
    for (auto& v : eta) v = std::floor(rng.uniform() * 9.0) - 4.0;
    const double s = std::accumulate(eta.begin(), eta.end(), 0.0);
    for (int l = 1; l <= 4; ++l) CHECK(evaluate_expansion(partition_expansion(l), eta) == std::pow(s, l));
  }
  const std::vector<double> pts{1.0, 2.0, 3.0};
  const std::vector<int> p11{1, 1};
  CHECK(correlation_delta(pts, p11) == 2.0 * (1 * 2 + 1 * 3 + 2 * 3));
  const std::vector<int> p111_4{1, 1, 1, 1};
  CHECK(correlation_delta(pts, p111_4) == 0.0);
}

TEST_CASE("exp truncation gap") {
  const std::vector<double> zeros(5, 0.0);
  CHECK(exp_truncation_gap(zeros, 3) == 0.0);
  const std::vector<double> one{1.0};
  CHECK(exp_truncation_gap(one, 2) == doctest::Approx(std::exp(1.0) - 2.5).epsilon(1e-14));
  CHECK(exp_truncation_gap(one, 2) == doctest::Approx(0.218282).epsilon(1e-6));
  CHECK(exp_truncation_gap(one, 2) <= std::exp(1.0) / 6.0);
  CounterRng rng(5, 0);
  for (int k = 0; k <= 8; ++k) {
    for (int i = 0; i < 200; ++i) {
      const double x = 20.0 * rng.uniform();
      const std::vector<double> v{x};
      const double gap = exp_truncation_gap(v, k);
      double partial = 0.0, term = 1.0;
      for (int l = 0; l <= k; ++l) {
        partial += term;
        term *= x / (l + 1);
      }
      CHECK(gap >= 0.0);
      CHECK(gap <= term * std::exp(x) * (1.0 + 1e-12));
      CHECK(gap == doctest::Approx(std::exp(x) - partial).epsilon(1e-9));
    }
  }
  const std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(exp_truncation_gap(neg, 1), Error);
}

TEST_CASE("mc_driver determinism and validation") {
  Experiment ex;
  ex.kind = "moment";
  ex.n = 12;
  ex.fn = testfn::Gk{3};
  ex.mode = LinStatMode::centered;
  const auto a = mc_driver(ex, 3000, 9, 1);
  const auto b = mc_driver(ex, 3000, 9, 8);
  REQUIRE(a.moments.size() == b.moments.size());
  for (std::size_t i = 0; i < a.moments.size(); ++i) {
    CHECK(std::abs(a.moments[i].estimate - b.moments[i].estimate) <= 1e-9 * std::abs(a.moments[i].estimate));
    CHECK(a.moments[i].stderr_ == doctest::Approx(b.moments[i].stderr_).epsilon(1e-9));
  }
  Experiment r;
  r.kind = "ratio";
  r.n = 4;
  r.ratio = {{1.0}, {-1.0}};
  const auto r1 = mc_driver(r, 5000, 3, 1);
  const auto r3 = mc_driver(r, 5000, 3, 3);
  CHECK(r1.ratio_mean == r3.ratio_mean);
  CHECK(std::abs(r1.ratio_mean.real() - r1.ratio_exact.real()) <= 3.0 * r1.ratio_stderr_re);

  CHECK_THROWS_AS(mc_driver(ex, 0, 1, 1), Error);
  Experiment bad;
  bad.kind = "nonsense";
  CHECK_THROWS_AS(mc_driver(bad, 10, 1, 1), Error);
  CHECK_THROWS_AS(mc_run([](std::uint64_t, std::span<double>) {}, 1, 0, 1, false), Error);
}

TEST_CASE("tail experiment on <Q, E> at n = 50") {
  Experiment ex;
  ex.kind = "tail";
  ex.n = 50;
  ex.sampler = cue::Sampler::verblunsky;
  ex.fn = testfn::Q{};
  ex.grid = linear_grid(1.0, 9.0, 33);
  const auto rep = mc_driver(ex, 100000, 6, 2);
  const auto at = [&](double x) {
    const auto it = std::find_if(rep.tail.grid.begin(), rep.tail.grid.end(), [&](double g) { return std::abs(g - x) < 1e-12; });
    return rep.tail.survival[static_cast<std::size_t>(it - rep.tail.grid.begin())];
  };
  CHECK(at(8.0) < at(4.0));
  CHECK(at(1.0) == 1.0);
  // The resolvent fast path agrees with the eigenangle route sample by sample.
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto v = cue::sample_verblunsky(50, 6, i);
    const auto s = cue::sample_eigenangles(50, 6, i, cue::Sampler::verblunsky);
    CHECK(std::abs(cue::linstat_resolvent(v, testfn::Q{}).raw - cue::linstat(s, testfn::Q{}).raw) < 1e-10);
  }
}

TEST_CASE("moment growth of centered G_k and What statistics at n = 64") {
  const int n = 64, draws = 1500;
  const std::vector<int> ks{2, 4, 8, 16};
  // Columns: |<G_k, E~>|^2 for k in ks, then |<What^(1/k), E>|^2 for k in ks.
  const auto r = mc_run(
      [&](std::uint64_t i, std::span<double> out) {
        const auto s = cue::sample_eigenangles(n, 77, i, cue::Sampler::verblunsky);
        for (std::size_t j = 0; j < ks.size(); ++j) {
          out[j] = std::norm(cue::linstat(s, testfn::Gk{ks[j]}, LinStatMode::centered));
          out[ks.size() + j] = std::norm(cue::linstat(s, testfn::WhatK{ks[j]}).raw);
        }
      },
      8, draws, 1, true);
  // (E|X|^{2l})^{1/l} <= c l over 2l <= k.
  double c = 0.0, c_min = 1e300;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const auto col = r.column(static_cast<int>(j));
    for (int l = 1; 2 * l <= ks[j] && l <= 4; ++l) {
      const auto m = moment_ci(col, l);
      const double ratio = std::pow(m.estimate.real(), 1.0 / l) / l;
      c = std::max(c, ratio);
      c_min = std::min(c_min, ratio);
    }
  }
  CAPTURE(c);
  CAPTURE(c_min);
  // The scale is set by G(0)^2; the shape claim is that one c covers every (l, k).
  CHECK(c <= 200.0);
  CHECK(c / c_min <= 2.0);
  // E|<What^(1/k), E>|^2 <= c' / k^2.
  double cw = 0.0;
  for (std::size_t j = 0; j < ks.size(); ++j) cw = std::max(cw, r.mean(static_cast<int>(ks.size() + j)) * ks[j] * ks[j]);
  CAPTURE(cw);
  CHECK(cw <= 0.1);
}
