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
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "speclab/error.hpp"
#include "speclab/special.hpp"
#include "speclab/zeta.hpp"

#ifndef SPECLAB_TEST_DATA
#define SPECLAB_TEST_DATA "tests/data"
#endif

using namespace speclab;
using namespace speclab::zeta;

namespace {

constexpr double kPi = std::numbers::pi;

// Borwein's accelerated alternating series for eta(s), then zeta = eta/(1 - 2^{1-s}).
cplx zeta_borwein(cplx s) {
  constexpr int n = 60;
  std::vector<double> d(n + 1);
  double term = 1.0 / n, sum = term;
  d[0] = sum;
  for (int i = 1; i <= n; ++i) {
    term *= double(n + i - 1) * 4.0 * double(n - i + 1) / (double(2 * i - 1) * 2.0 * i);
    sum += term;
    d[i] = sum;
  }
  cplx eta{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const cplx v = (d[k] - d[n]) * std::exp(-s * std::log(k + 1.0));
    eta += (k % 2) ? -v : v;
  }
  eta /= -d[n];
  return eta / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

const ZeroTable& reference_table() {
  static const ZeroTable t = read_zero_table(std::string(SPECLAB_TEST_DATA) + "/zeta_zeros_first200.txt", TableFormat::plain);
  return t;
}

const ZeroTable& located_table() {
  static const ZeroTable t = make_table(locate_zeros(0.0, 2100.0), 1e-9);
  return t;
}

}  // namespace

TEST_CASE("ingest plain tables") {
  std::istringstream in("14.134725\n21.022040\n25.010858\n");
  const auto t = ingest_zero_table(in, TableFormat::plain);
  CHECK(t.ordinates.size() == 3);
  CHECK(t.height_max == 25.010858);
  CHECK(t.height_min == 14.134725);
  CHECK(t.stated_precision == doctest::Approx(1e-6));
  CHECK(t.covered_from() == 0.0);

  std::istringstream crlf("# comment\r\n14.1347\r\n\r\n21.0220\r\n");
  CHECK(ingest_zero_table(crlf, TableFormat::plain).ordinates.size() == 2);

  std::istringstream dup("14.5\n14.5\n");
  CHECK(ingest_zero_table(dup, TableFormat::plain).ordinates.size() == 2);

  std::istringstream bad("14.134725\n25.010858\n21.022040\n");
  try {
    ingest_zero_table(bad, TableFormat::plain);
    FAIL("expected an ordering error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::validation);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream junk("14.1\n2x.5\n");
  try {
    ingest_zero_table(junk, TableFormat::plain);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(ingest_zero_table(empty, TableFormat::plain), Error);
  CHECK_THROWS_AS(read_zero_table("/nonexistent/zeros.txt", TableFormat::plain), Error);
}

TEST_CASE("ingest offset tables") {
  std::istringstream in("# offset 1000.0\n0.5\n1.25\n3.0\n");
  const auto t = ingest_zero_table(in, TableFormat::offset_block);
  REQUIRE(t.ordinates.size() == 3);
  CHECK(t.ordinates[1] == doctest::Approx(1001.25));
  CHECK(t.covered_from() == t.height_min);
  std::istringstream nohdr("0.5\n1.0\n");
  CHECK_THROWS_AS(ingest_zero_table(nohdr, TableFormat::offset_block), Error);
}

TEST_CASE("reference table agrees with the locator") {
  const auto& ref = reference_table();
  CHECK(ref.ordinates.size() == 200);
  const auto& loc = located_table();
  for (int i = 0; i < 200; ++i) CHECK(std::abs(ref.ordinates[i] - loc.ordinates[i]) < 1e-6);
}

TEST_CASE("zeta_em examples") {
  const auto z2 = zeta_em(2.0);
  CHECK(std::abs(z2.value - kPi * kPi / 6.0) < 1e-10);
  CHECK(z2.error < 1e-9);
  CHECK(std::abs(zeta_em(0.5).value - cplx{-1.4603545088095868, 0.0}) < 1e-10);
  CHECK(std::abs(zeta_em(cplx{0.5, 14.134725141734693}).value) < 1e-5);
  for (const cplx s : {cplx{0.5, 0.0}, cplx{0.7, 3.0}, cplx{1.5, -7.0}, cplx{0.25, 20.0}, cplx{3.0, 1.0}}) {
    CAPTURE(s);
    CHECK(std::abs(zeta_em(s).value - zeta_borwein(s)) < 1e-9);
  }
  CHECK_THROWS_AS(zeta_em(cplx{1.0, 1e-9}), Error);
  CHECK_THROWS_AS(zeta_em(cplx{-0.5, 1.0}), Error);
  CHECK_THROWS_AS(zeta_em(cplx{0.5, 6e4}), Error);
}

TEST_CASE("hardy Z") {
  CHECK(hardy_z(0.0) == doctest::Approx(-1.4603545088).epsilon(1e-9));
  CHECK(std::abs(hardy_z(14.134725)) < 1e-5);
  const double t = 100.0;
  const cplx rot = std::polar(1.0, special::riemann_siegel_theta(t)) * zeta_em(cplx{0.5, t}).value;
  CHECK(std::abs(rot.imag()) < 1e-8);
  CHECK(std::abs(rot.real() - hardy_z(t)) < 1e-9);
  CHECK_THROWS_AS(hardy_z(-1.0), Error);
}

TEST_CASE("locate zeros") {
  const auto z = locate_zeros(0.0, 35.0);
  const std::vector<double> expect{14.1347, 21.0220, 25.0109, 30.4249, 32.9351};
  REQUIRE(z.size() == expect.size());
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(z[i] - expect[i]) < 1e-4);
  const auto rep = locate_zeros_report(0.0, 100.0);
  CHECK(rep.zeros.size() == 29);
  CHECK(std::abs(zero_count_estimate(100.0) - 29.0) < 2.0);
  CHECK(locate_zeros(15.0, 16.0).empty());
  CHECK_THROWS_AS(locate_zeros(0.0, 10.0, 1e-12), Error);
  // Every located zero is a sign change of Z.
  for (const double g : located_table().ordinates) {
    if (g > 300.0) break;
    CHECK(hardy_z(g - 1e-6) * hardy_z(g + 1e-6) < 0.0);
  }
}

TEST_CASE("omega") {
  const double euler = 0.57721566490153286;
  const double d14 = -euler - 3.0 * std::log(2.0) - kPi / 2.0;
  CHECK(omega(0.0) == doctest::Approx(d14 - std::log(kPi)).epsilon(1e-13));
  CHECK(omega(0.0) == doctest::Approx(-5.372183).epsilon(1e-6));
  for (const double x : {0.3, 2.0, 17.5, 400.0}) CHECK(omega(-x) == omega(x));
  // Omega(xi) = log(|xi|/2) - log pi + O(1/xi^2); the cruder log((|xi|+2)/2pi) is off by O(1/|xi|).
  double worst = 0.0;
  for (double xi = 10.0; xi <= 1e5; xi *= 1.5) {
    worst = std::max(worst, std::abs(omega(xi) - std::log((xi + 2.0) / (2.0 * kPi))) * (xi + 2.0));
  }
  CHECK(worst <= 2.25);
  CHECK(std::abs(omega(1000.0) / (2 * kPi) - std::log(1002.0 / (2 * kPi)) / (2 * kPi)) <= 2.25 / (2 * kPi) / 1002.0);
}

TEST_CASE("von Mangoldt and psi") {
  CHECK(von_mangoldt(8) == doctest::Approx(std::log(2.0)));
  CHECK(von_mangoldt(6) == 0.0);
  CHECK(von_mangoldt(1) == 0.0);
  CHECK(von_mangoldt(49) == doctest::Approx(std::log(7.0)));
  CHECK(von_mangoldt(97) == doctest::Approx(std::log(97.0)));
  const double p10 = 3 * std::log(2.0) + 2 * std::log(3.0) + std::log(5.0) + std::log(7.0);
  CHECK(psi(10.0) == doctest::Approx(p10).epsilon(1e-14));
  CHECK(psi(10.0) == doctest::Approx(7.83202).epsilon(1e-6));
  double direct = 0.0;
  for (long long n = 1; n <= 5000; ++n) direct += von_mangoldt(n);
  CHECK(psi(5000.5) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(std::abs(psi(1e6) / 1e6 - 1.0) < 0.01);
  CHECK_THROWS_AS(psi(2e9), Error);
}

TEST_CASE("B-spline test functions: transform and exponential moment by quadrature") {
  struct Case {
    ExplicitTestFn g;
    double c, half;
  };
  const Case cases[] = {{bspline(6, 0.5, 1.2), 1.2, 1.5}, {bspline(1, 0.8, -0.3), -0.3, 0.4}, {bspline(3, 0.7, 0.0, 2.0), 0.0, 1.05}};
  for (const auto& [g, c, half] : cases) {
    CAPTURE(g.name);
    // Panels split at the support ends of g(x) and g(-x), where a box jumps.
    const auto quad = [&](auto f) {
      std::vector<double> pts{c - half, c + half, -c - half, -c + half};
      std::sort(pts.begin(), pts.end());
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], 12, 1e-12);
      }
      return sum;
    };
    const double mass = quad([&](double x) { return x >= c - half && x <= c + half ? g.g(x) : 0.0; });
    CHECK(mass == doctest::Approx(g.transform(0.0).real()).epsilon(1e-10));
    const double em = quad([&](double x) { return (g.g(x) + g.g(-x)) * std::exp(0.5 * x); });
    CHECK(em == doctest::Approx(g.exp_moment).epsilon(1e-10));
    for (const double gamma : {0.7, 3.0, 11.0}) {
      const double re = quad([&](double x) { return x >= c - half && x <= c + half ? g.g(x) * std::cos(gamma * x) : 0.0; });
      const double im = quad([&](double x) { return x >= c - half && x <= c + half ? -g.g(x) * std::sin(gamma * x) : 0.0; });
      CHECK(std::abs(g.transform(gamma) - cplx{re, im}) < 1e-10);
      CHECK(std::abs(g.transform(gamma)) <= g.envelope(gamma) + 1e-15);
    }
  }
}

TEST_CASE("explicit formula") {
  const auto& table = reference_table();
  const auto zero = explicit_formula_sides(bspline(6, 0.5, 0.0, 0.0), table);
  CHECK(zero.zero_side == 0.0);
  CHECK(zero.prime_side == 0.0);
  CHECK(zero.residual == 0.0);

  const double top = std::log(50.0);
  const std::vector<ExplicitTestFn> family{
      bspline(6, 0.5, 0.0), bspline(6, 0.5, 1.2), bspline(8, 0.4, -1.5), bspline(5, 0.7, 2.0),
      combine({bspline(6, 0.5, 0.7), bspline(7, 0.3, -2.5, -0.5)})};
  for (const auto& g : family) {
    CAPTURE(g.name);
    CHECK(g.support <= top);
    const auto r = explicit_formula_sides(g, table);
    CHECK(std::abs(r.residual) <= r.truncation_bound);
    CHECK(r.truncation_bound < 1e-3);
  }
  // Odd g: the transform is imaginary and g(x) + g(-x) = 0, so both sides vanish.
  const auto odd = combine({bspline(6, 0.5, 1.0), bspline(6, 0.5, -1.0, -1.0)});
  const auto r = explicit_formula_sides(odd, table);
  CHECK(std::abs(odd.exp_moment) < 1e-15);
  CHECK(std::abs(r.prime_side) < 1e-12);
  CHECK(std::abs(r.zero_side) < 1e-12);
  CHECK(std::abs(r.residual) <= r.truncation_bound);
}

TEST_CASE("zero linear statistics") {
  const auto& table = located_table();
  const auto w = make_window(900.0);
  const double t = 1000.0;
  const auto q = zero_linstat(table, w, t, testfn::Q{});
  CHECK(q.raw.real() >= 0.0);
  // Brute force over the window [t - H, t + H] with H = 1000.
  cplx brute{0.0, 0.0};
  for (const double g : table.ordinates) {
    if (std::abs(g - t) <= 1000.0) brute += 1.0 / (1.0 + std::pow(w.density * (g - t), 2));
  }
  CHECK(std::abs(q.raw - q.reference - q.centered) < 1e-12);
  // raw adds the density integral outside the window, about 2 int_H^inf Omega/(2pi L^2 u^2) du.
  const double outer = (q.raw - brute).real();
  CHECK(outer > 0.0);
  CHECK(outer < 2.0 * std::log(3000.0) / (2.0 * kPi) / (w.density * w.density * 1000.0));
  CHECK(q.terms == static_cast<long>(table.count_in(0.0, 2000.0)));
  CHECK(std::abs(q.centered) < 5.0);

  // Indicator of [0, 1/2pi] counts zeros in [t, t + 1/log T].
  for (const double s : {950.0, 1234.5, 1500.25, 1777.0}) {
    const auto c = zero_linstat(table, w, s, testfn::Indicator{0.0, 1.0 / (2.0 * kPi)});
    const double direct = static_cast<double>(table.count_in(s, s + 1.0 / std::log(900.0)));
    CHECK(std::abs(c.raw.real() - direct) < 1e-12);
  }

  // <J, Z^o> = O(1/log T): measured constant over sampled t.
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = 900.0 + 9.0 * i;
    worst = std::max(worst, std::abs(zero_linstat(table, w, s, testfn::J{}, 100.0).reference) * std::log(900.0));
  }
  CAPTURE(worst);
  CHECK(worst <= 1.0);

  CHECK_THROWS_AS(zero_linstat(table, w, 500.0, testfn::Q{}), Error);
  CHECK_THROWS_AS(zero_linstat(table, w, 1000.0, testfn::Q{}, 5000.0), Error);
}

TEST_CASE("ratio and log-derivative from zeros") {
  const auto& table = located_table();
  const auto w = make_window(900.0);
  const double lt = std::log(900.0);
  CHECK(zeta_ratio_from_zeros(table, w, 1000.0, cplx{1.0, 0.5}, cplx{1.0, 0.5}).value == cplx{1.0, 0.0});
  for (const double t : {930.0, 1000.0, 1090.0}) {
    CAPTURE(t);
    const auto r = zeta_ratio_from_zeros(table, w, t, 2.0, 1.0, 800.0);
    CHECK(r.route == "exact");
    const cplx em = zeta_em(cplx{0.5 + 2.0 / lt, t}).value / zeta_em(cplx{0.5 + 1.0 / lt, t}).value;
    CHECK(std::abs(r.value / em - 1.0) < 1e-3);
    // Centered difference of log zeta in the shift.
    const double h = 1e-5;
    const cplx fd = (std::log(zeta_em(cplx{0.5 + (1.0 + h) / lt, t}).value) -
                     std::log(zeta_em(cplx{0.5 + (1.0 - h) / lt, t}).value)) /
                    (2.0 * h);
    const auto ld = zeta_logderiv_from_zeros(table, w, t, 1.0, 800.0);
    CHECK(std::abs(ld.value - fd) < std::max(1e-3, 1.0 / lt));
  }
  CHECK(zeta_ratio_from_zeros(table, w, 1000.0, 1.0, -1.0, 300.0).route == "first-order");
  CHECK_THROWS_AS(zeta_ratio_from_zeros(table, w, 1000.0, 1.0, cplx{0.0, 1.0}), Error);
  CHECK_THROWS_AS(zeta_logderiv_from_zeros(table, w, 1000.0, -1.0), Error);
}

TEST_CASE("log-derivative on toy tables") {
  const double t = 1000.0, d = 0.8;
  const auto w = make_window(900.0);
  const auto toy = make_table({t - d, t + d}, 1e-12);
  const double alpha = 1.5;
  const auto r = zeta_logderiv_from_zeros(toy, w, t, alpha);
  // Window reference by an independent quadrature.
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto ig = [&](double u) { return 1.0 / (alpha - 2.0 * kPi * cplx{0.0, 1.0} * w.density * u); };
  const double ref_re = ts.integrate([&](double u) { return ig(u).real() * omega(t + u) / (2 * kPi); }, -d, d);
  const double ref_im = ts.integrate([&](double u) { return ig(u).imag() * omega(t + u) / (2 * kPi); }, -d, d);
  const cplx pair = ig(-d) + ig(d);
  CHECK(std::abs(r.value + cplx{ref_re, ref_im} - pair) < 1e-10);
  CHECK(std::abs(pair.imag()) < 1e-15);
  // Pair cancellation leaves only the asymmetry of Omega across the window.
  CHECK(std::abs(r.value.imag()) < 1e-3);
}
