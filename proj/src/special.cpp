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

#include "speclab/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "speclab/error.hpp"

namespace speclab::special {

namespace {

// B_{2k}, k = 0..30.
constexpr std::array<double, kMaxBernoulli + 1> kBernoulli = {
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
    1520097643918070802691.0 / 1806.0,
    -27833269579301024235023.0 / 690.0,
    596451111593912163277961.0 / 282.0,
    -5609403368997817686249127547.0 / 46410.0,
    495057205241079648212477525.0 / 66.0,
    -801165718135489957347924991853.0 / 1590.0,
    29149963634884862421418123812691.0 / 798.0,
    -2479392929313226753685415739663229.0 / 870.0,
    84483613348880041862046775994036021.0 / 354.0,
    -1215233140483755572040304994079820246041491.0 / 56786730.0,
};

constexpr double kShiftRadius = 8.0;

}  // namespace

double bernoulli_even(int k) {
  require(k >= 0 && k <= kMaxBernoulli, ErrorKind::domain, "bernoulli_even: index out of range");
  return kBernoulli[static_cast<std::size_t>(k)];
}

cplx digamma(cplx z) {
  if (z.real() <= 0.0 && z.imag() == 0.0 && z.real() == std::floor(z.real())) {
    fail(ErrorKind::domain, "digamma: pole at non-positive integer");
  }
  cplx shift{0.0, 0.0};
  // Reflection keeps the recurrence short for far-left arguments.
  if (z.real() < -kShiftRadius) {
    const cplx pz = std::numbers::pi * z;
    return digamma(1.0 - z) - std::numbers::pi * std::cos(pz) / std::sin(pz);
  }
  while (std::abs(z) < kShiftRadius || z.real() < 1.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series{0.0, 0.0};
  cplx pw = inv2;
  for (int k = 1; k <= 10; ++k) {
    series += kBernoulli[static_cast<std::size_t>(k)] / (2.0 * k) * pw;
    pw *= inv2;
  }
  return shift + std::log(z) - 0.5 * inv - series;
}

double digamma(double x) { return digamma(cplx{x, 0.0}).real(); }

cplx log_gamma(cplx z) {
  require(z.real() > 0.0, ErrorKind::domain, "log_gamma: requires Re z > 0");
  cplx shift{0.0, 0.0};
  while (std::abs(z) < 15.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series{0.0, 0.0};
  cplx pw = inv;
  for (int k = 1; k <= 12; ++k) {
    series += kBernoulli[static_cast<std::size_t>(k)] / (2.0 * k * (2.0 * k - 1.0)) * pw;
    pw *= inv2;
  }
  return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

double riemann_siegel_theta(double t) {
  if (std::abs(t) > 50.0) {
    // Asymptotic expansion avoids cancellation in Im log Gamma at large t.
    const double a = std::abs(t);
    const double a2 = a * a;
    double th = 0.5 * a * std::log(a / (2.0 * std::numbers::pi)) - 0.5 * a - std::numbers::pi / 8.0 +
                1.0 / (48.0 * a) + 7.0 / (5760.0 * a * a2) + 31.0 / (80640.0 * a2 * a2 * a) +
                127.0 / (430080.0 * a2 * a2 * a2 * a);
    return t < 0 ? -th : th;
  }
  const cplx lg = log_gamma(cplx{0.25, 0.5 * t});
  return lg.imag() - 0.5 * t * std::log(std::numbers::pi);
}

double hurwitz_zeta(double s, double x) {
  require(s > 1.0 && x > 0.0, ErrorKind::domain, "hurwitz_zeta: requires s > 1, x > 0");
  constexpr int kDirect = 12;
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::pow(k + x, -s);
  const double a = kDirect + x;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // Euler-Maclaurin: sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) a^{-s-2j+1}
  double rising = s;
  double fact = 2.0;
  double apow = std::pow(a, -s - 1.0);
  for (int j = 1; j <= 12; ++j) {
    const double term = kBernoulli[static_cast<std::size_t>(j)] / fact * rising * apow;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    apow /= a * a;
  }
  return sum;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

cplx expm1(cplx z) {
  const double c = std::cos(z.imag());
  const double h = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) * c - 2.0 * h * h, std::exp(z.real()) * std::sin(z.imag())};
}

}  // namespace speclab::special
