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

#include "speclab/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "speclab/error.hpp"
#include "speclab/special.hpp"

namespace speclab::testfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_real(cplx z, const char* who) {
  require(z.imag() == 0.0, ErrorKind::domain, std::string(who) + ": defined on the real line only");
}

cplx eval_G(cplx z) {
  const cplx a = special::sinc(kPi * (z + 0.25));
  const cplx b = special::sinc(kPi * (z - 0.25));
  return kB0 * (a * a + b * b);
}

cplx eval_J(cplx z) {
  const cplx w = 2.0 * kPi * z;
  return w / (1.0 + w * w);
}

cplx eval_L(const L& p, double xi) {
  const cplx num = p.alpha / (2.0 * kPi) - kI * xi;
  const cplx den = p.beta / (2.0 * kPi) - kI * xi;
  return std::log(num / den);
}

// F for the L kernel when Re alpha, Re beta > 0: (e^{ax} - e^{bx})/x on x < 0.
cplx preimage_L(cplx a, cplx b, double x) {
  if (x > 0.0) return 0.0;
  if (x == 0.0) return 0.5 * (a - b);
  const double scale = std::max(std::abs(a), std::abs(b)) * std::abs(x);
  if (scale < 1e-3) {
    return (a - b) + 0.5 * (a * a - b * b) * x + (a * a * a - b * b * b) * x * x / 6.0;
  }
  return (std::exp(a * x) - std::exp(b * x)) / x;
}

cplx preimage_W(int k, double x) {
  const double ax = std::abs(x);
  if (ax >= 1.0 / k || x == 0.0) return 0.0;
  return 0.5 * kI * sign(x) * std::exp(-ax) * (1.0 - k * ax);
}

// sin(pi w) / (q sin(pi w / q)), periodic in w with period q (up to sign).
double fejer_ratio(double w, int q) {
  const double qd = q;
  double r = std::remainder(w, qd);
  if (std::abs(r) < 1e-5) {
    const double t = kPi * r;
    return 1.0 - t * t * (1.0 - 1.0 / (qd * qd)) / 6.0;
  }
  return std::sin(kPi * r) / (qd * std::sin(kPi * r / qd));
}

// sum_nu G_k(offset + period nu) by residue classes of nu modulo k/gcd.
double periodized_G(int k, double offset, int period) {
  const int g = std::gcd(period, k);
  const int p = k / g;
  const int q = period / g;
  const double rho = static_cast<double>(period) / k;
  double total = 0.0;
  for (const double shift : {0.25, -0.25}) {
    const double c = offset / k + shift;
    for (int r = 0; r < p; ++r) {
      const double f = fejer_ratio(c + rho * r, q);
      total += f * f;
    }
  }
  return kB0 * total;
}

cplx periodized_J(double offset, int period) {
  const cplx lift{0.0, 1.0 / (2.0 * kPi)};
  return (lattice_cot(offset + lift, period) + lattice_cot(offset - lift, period)) / (4.0 * kPi);
}

cplx periodized_W(int k, double offset, int period) {
  const int g = std::gcd(period, k);
  const int p = k / g;
  const cplx lift{0.0, 1.0 / (2.0 * kPi)};
  const double damp = std::exp(-1.0 / k);
  cplx k_plus = lattice_csc2(offset - lift, period);
  cplx k_minus = lattice_csc2(offset + lift, period);
  for (int r = 0; r < p; ++r) {
    const double base = offset + static_cast<double>(period) * r;
    const cplx phase = std::polar(1.0, -2.0 * kPi * base / k);
    k_plus -= damp * phase * lattice_csc2(base - lift, static_cast<double>(period) * p);
    k_minus -= damp * std::conj(phase) * lattice_csc2(base + lift, static_cast<double>(period) * p);
  }
  const double norm = -1.0 / (4.0 * kPi * kPi);
  return periodized_J(offset, period) + static_cast<double>(k) / (2.0 * kI) * norm * (k_plus - k_minus);
}

cplx periodized_L(const L& p, double offset, int period) {
  const double big = std::max(std::abs(p.alpha), std::abs(p.beta));
  const double n = period;
  const long v = std::max<long>(8, static_cast<long>(std::ceil(20.0 * big / (2.0 * kPi * n))) + 1);
  cplx sum{0.0, 0.0};
  sum += eval_L(p, offset);
  for (long nu = 1; nu <= v; ++nu) {
    sum += eval_L(p, offset + n * nu) + eval_L(p, offset - n * nu);
  }
  // Tail: L(xi) = sum_m c_m xi^{-m}, c_m = (-1)^{m+1} (i/2pi)^m (a^m - b^m)/m.
  const double x = offset / n;
  const double start = static_cast<double>(v + 1);
  cplx ia = kI * p.alpha / (2.0 * kPi);
  cplx ib = kI * p.beta / (2.0 * kPi);
  cplx pa = ia;
  cplx pb = ib;
  for (int m = 1; m <= 16; ++m) {
    const double sgn = (m % 2 == 1) ? 1.0 : -1.0;
    const cplx cm = sgn * (pa - pb) / static_cast<double>(m);
    double lattice;
    if (m == 1) {
      lattice = (special::digamma(start - x) - special::digamma(start + x)) / n;
    } else {
      const double alt = (m % 2 == 0) ? 1.0 : -1.0;
      lattice = (special::hurwitz_zeta(m, start + x) + alt * special::hurwitz_zeta(m, start - x)) / std::pow(n, m);
    }
    sum += cm * lattice;
    pa *= ia;
    pb *= ib;
  }
  return sum;
}

// Symmetric-limit integral of the principal-branch L. With a = alpha/2pi and
// b = beta/2pi, the naive antiderivative i(u Log u - u) gives pi(a - b); each
// principal Log that crosses its cut, and each interval on which the ratio's
// principal Log differs from Log(num) - Log(den) by 2 pi i k, adds a
// correction.
cplx symmetric_integral_L(const L& p) {
  const cplx a = p.alpha / (2.0 * kPi);
  const cplx b = p.beta / (2.0 * kPi);
  cplx total = kPi * (a - b);
  std::vector<double> cuts;
  if (a.real() < 0.0) {
    total -= 2.0 * kPi * a.real();
    cuts.push_back(a.imag());
  }
  if (b.real() < 0.0) {
    total += 2.0 * kPi * b.real();
    cuts.push_back(b.imag());
  }
  if (a.real() != b.real()) cuts.push_back(-(a * std::conj(b)).imag() / (a.real() - b.real()));
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
    const double width = cuts[m + 1] - cuts[m];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (cuts[m] + cuts[m + 1]);
    const cplx num = a - kI * mid;
    const cplx den = b - kI * mid;
    const double k = std::round((std::log(num / den) - std::log(num) + std::log(den)).imag() / (2.0 * kPi));
    total += 2.0 * kPi * kI * k * width;
  }
  return total;
}

}  // namespace

cplx symmetric_integral(const TestFunction& fn) {
  validate(fn);
  if (const auto* l = std::get_if<L>(&fn)) return symmetric_integral_L(*l);
  if (const auto* l = std::get_if<Ltrunc>(&fn)) return symmetric_integral_L(L{l->alpha, l->beta});
  if (std::holds_alternative<Weps>(fn)) return 0.0;
  return reference_integral(fn);
}

cplx lattice_cot(cplx z, double period) {
  const cplx w = kPi * z / period;
  cplx cot;
  if (w.imag() >= 0.0) {
    const cplx em1 = special::expm1(2.0 * kI * w);
    cot = kI * (2.0 + em1) / em1;
  } else {
    const cplx em1 = special::expm1(-2.0 * kI * w);
    cot = -kI * (2.0 + em1) / em1;
  }
  return kPi / period * cot;
}

cplx lattice_csc2(cplx z, double period) {
  const cplx w = kPi * z / period;
  const cplx em1 = (w.imag() >= 0.0) ? special::expm1(2.0 * kI * w) : special::expm1(-2.0 * kI * w);
  const cplx csc2 = -4.0 * (1.0 + em1) / (em1 * em1);
  const double s = kPi / period;
  return s * s * csc2;
}

std::string name(const TestFunction& fn) {
  return std::visit(
      overloaded{
          [](const Q&) { return std::string("Q"); },
          [](const G&) { return std::string("G"); },
          [](const Gk& f) { return "G_" + std::to_string(f.k); },
          [](const J&) { return std::string("J"); },
          [](const Weps& f) { return "W(eps=" + std::to_string(f.eps) + ")"; },
          [](const WhatK& f) { return "What_" + std::to_string(f.k); },
          [](const Ialpha&) { return std::string("I_alpha"); },
          [](const L&) { return std::string("L"); },
          [](const Ltrunc& f) { return "Ltrunc_" + std::to_string(f.k); },
          [](const BandLimited&) { return std::string("BandLimited"); },
          [](const Indicator&) { return std::string("Indicator"); },
      },
      fn);
}

void validate(const TestFunction& fn) {
  std::visit(overloaded{
                 [](const Gk& f) { require(f.k >= 1, ErrorKind::domain, "G_k: k must be >= 1"); },
                 [](const WhatK& f) { require(f.k >= 1, ErrorKind::domain, "What_k: k must be >= 1"); },
                 [](const Weps& f) { require(f.eps > 0.0, ErrorKind::domain, "W^eps: eps must be > 0"); },
                 [](const Ialpha& f) {
                   require(f.alpha.real() != 0.0, ErrorKind::domain, "I_alpha: Re alpha must be nonzero");
                 },
                 [](const L& f) { require(f.beta.real() != 0.0, ErrorKind::domain, "L: Re beta must be nonzero"); },
                 [](const Ltrunc& f) {
                   require(f.beta.real() != 0.0, ErrorKind::domain, "Ltrunc: Re beta must be nonzero");
                   require(f.k >= 1, ErrorKind::domain, "Ltrunc: k must be >= 1");
                 },
                 [](const BandLimited& f) {
                   require(f.samples.size() >= 2 && f.halfwidth > 0.0, ErrorKind::domain,
                           "BandLimited: need >= 2 samples and positive halfwidth");
                 },
                 [](const Indicator& f) { require(f.lo < f.hi, ErrorKind::domain, "Indicator: need lo < hi"); },
                 [](const auto&) {},
             },
             fn);
}

cplx tent_integral(cplx s, double width) {
  const cplx sw = s * width;
  if (std::abs(sw) < 1.0) {
    // sum_n (-s)^n w^{n+1} / (n! (n+1)(n+2))
    cplx term = width;  // (-s)^n w^{n+1} / n!
    cplx sum{0.0, 0.0};
    for (int n = 0; n < 30; ++n) {
      sum += term / ((n + 1.0) * (n + 2.0));
      term *= -sw / (n + 1.0);
    }
    return sum;
  }
  return 1.0 / s - (1.0 - std::exp(-sw)) / (width * s * s);
}

cplx what_tent(int k, cplx z) {
  const double width = 1.0 / k;
  const cplx s = 1.0 + 2.0 * kPi * kI * z;
  const cplx sb = 1.0 - 2.0 * kPi * kI * z;
  return 0.5 * kI * (tent_integral(s, width) - tent_integral(sb, width));
}

cplx what_closed_form(int k, cplx z) {
  auto kernel = [k](cplx w) {
    const cplx s = 1.0 + 2.0 * kPi * kI * w;
    return (1.0 - std::exp(-s / static_cast<double>(k))) / (s * s);
  };
  return eval_J(z) + static_cast<double>(k) / (2.0 * kI) * (kernel(z) - kernel(-z));
}

cplx fourier_Gk(int k, double x) {
  require(k >= 1, ErrorKind::domain, "fourier_Gk: k must be >= 1");
  const double u = std::abs(k * x);
  if (u >= 1.0) return 0.0;
  return k * kB0 * (1.0 - u) * 2.0 * std::cos(kPi * k * x / 2.0);
}

cplx eval(const TestFunction& fn, cplx z) {
  validate(fn);
  require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorKind::domain, "eval: argument not finite");
  return std::visit(
      overloaded{
          [&](const Q&) -> cplx { return 1.0 / (1.0 + z * z); },
          [&](const G&) -> cplx { return eval_G(z); },
          [&](const Gk& f) -> cplx { return eval_G(z / static_cast<double>(f.k)); },
          [&](const J&) -> cplx { return eval_J(z); },
          [&](const Weps& f) -> cplx {
            require_real(z, "W^eps");
            const double x = z.real();
            const double ax = std::abs(x);
            if (ax >= f.eps || x == 0.0) return 0.0;
            return 0.5 * kI * sign(x) * std::exp(-ax) * (1.0 - ax / f.eps);
          },
          [&](const WhatK& f) -> cplx {
            const cplx s = 1.0 + 2.0 * kPi * kI * z;
            const cplx sb = 1.0 - 2.0 * kPi * kI * z;
            if (std::min(std::abs(s), std::abs(sb)) < 1e-6) return what_tent(f.k, z);
            return what_closed_form(f.k, z);
          },
          [&](const Ialpha& f) -> cplx { return 1.0 / (f.alpha - 2.0 * kPi * kI * z); },
          [&](const L& f) -> cplx {
            require_real(z, "L");
            return eval_L(f, z.real());
          },
          [&](const Ltrunc& f) -> cplx {
            require_real(z, "Ltrunc");
            return eval_L(L{f.alpha, f.beta}, z.real()) - kI * (f.alpha - f.beta) * what_closed_form(f.k, z);
          },
          [&](const BandLimited& f) -> cplx {
            const std::size_t m = f.samples.size() - 1;
            const double dx = f.spacing();
            const cplx s = 2.0 * kPi * kI * z;
            const cplx right = tent_integral(s, dx);
            const cplx left = tent_integral(-s, dx);
            cplx sum{0.0, 0.0};
            for (std::size_t j = 0; j <= m; ++j) {
              const double xj = -f.halfwidth + dx * static_cast<double>(j);
              cplx w{0.0, 0.0};
              if (j < m) w += right;
              if (j > 0) w += left;
              sum += f.samples[j] * std::exp(-s * xj) * w;
            }
            return sum;
          },
          [&](const Indicator& f) -> cplx {
            require_real(z, "Indicator");
            const double x = z.real();
            if (x < f.lo || x > f.hi) return 0.0;
            if (x == f.lo || x == f.hi) return 0.5;
            return 1.0;
          },
      },
      fn);
}

cplx reference_integral(const TestFunction& fn) {
  validate(fn);
  return std::visit(
      overloaded{
          [](const Q&) -> cplx { return kPi; },
          [](const G&) -> cplx { return 2.0 * kB0; },
          [](const Gk& f) -> cplx { return 2.0 * kB0 * f.k; },
          [](const J&) -> cplx { return 0.0; },
          [](const WhatK&) -> cplx { return 0.0; },
          [](const Ialpha& f) -> cplx { return 0.5 * sign(f.alpha.real()); },
          [&](const BandLimited&) -> cplx { return preimage(fn, 0.0); },
          [](const Indicator& f) -> cplx { return f.hi - f.lo; },
          [](const Ltrunc& f) -> cplx { return symmetric_integral_L(L{f.alpha, f.beta}); },
          [](const L&) -> cplx {
            fail(ErrorKind::domain, "reference_integral: L is not integrable without centering");
          },
          [](const Weps&) -> cplx { fail(ErrorKind::domain, "reference_integral: unsupported kind W^eps"); },
      },
      fn);
}

cplx preimage(const TestFunction& fn, double x) {
  validate(fn);
  return std::visit(
      overloaded{
          [&](const Q&) -> cplx { return kPi * std::exp(-2.0 * kPi * std::abs(x)); },
          [&](const G&) -> cplx { return fourier_Gk(1, x); },
          [&](const Gk& f) -> cplx { return fourier_Gk(f.k, x); },
          [&](const J&) -> cplx { return 0.5 * kI * sign(x) * std::exp(-std::abs(x)); },
          [&](const WhatK& f) -> cplx { return preimage_W(f.k, x); },
          [&](const Ialpha& f) -> cplx {
            const double s = sign(f.alpha.real());
            if (x == 0.0) return 0.5 * s;
            if (s > 0.0) return x < 0.0 ? std::exp(f.alpha * x) : cplx{0.0, 0.0};
            return x > 0.0 ? -std::exp(f.alpha * x) : cplx{0.0, 0.0};
          },
          [&](const L& f) -> cplx {
            require(f.alpha.real() > 0.0 && f.beta.real() > 0.0, ErrorKind::domain,
                    "preimage: L supported for Re alpha, Re beta > 0");
            return preimage_L(f.alpha, f.beta, x);
          },
          [&](const Ltrunc& f) -> cplx {
            require(f.alpha.real() > 0.0 && f.beta.real() > 0.0, ErrorKind::domain,
                    "preimage: Ltrunc supported for Re alpha, Re beta > 0");
            return preimage_L(f.alpha, f.beta, x) - kI * (f.alpha - f.beta) * preimage_W(f.k, x);
          },
          [&](const BandLimited& f) -> cplx {
            const double h = f.halfwidth;
            if (std::abs(x) > h) return 0.0;
            if (x == -h) return 0.5 * f.samples.front();
            if (x == h) return 0.5 * f.samples.back();
            const double pos = (x + h) / f.spacing();
            const std::size_t j = std::min(static_cast<std::size_t>(pos), f.samples.size() - 2);
            const double frac = pos - static_cast<double>(j);
            return (1.0 - frac) * f.samples[j] + frac * f.samples[j + 1];
          },
          [](const Weps&) -> cplx { fail(ErrorKind::domain, "preimage: unsupported kind W^eps"); },
          [](const Indicator&) -> cplx { fail(ErrorKind::domain, "preimage: Indicator has no integrable pre-image"); },
      },
      fn);
}

PreimageDecay preimage_decay(const TestFunction& fn) {
  validate(fn);
  return std::visit(
      overloaded{
          [](const Q&) { return PreimageDecay{false, 0.0, 2.0 * kPi, kPi}; },
          [](const G&) { return PreimageDecay{true, 1.0, 0.0, 0.0}; },
          [](const Gk& f) { return PreimageDecay{true, 1.0 / f.k, 0.0, 0.0}; },
          [](const J&) { return PreimageDecay{false, 0.0, 1.0, 0.5}; },
          [](const WhatK& f) { return PreimageDecay{true, 1.0 / f.k, 0.0, 0.0}; },
          [](const Ialpha& f) { return PreimageDecay{false, 0.0, std::abs(f.alpha.real()), 1.0}; },
          [](const L& f) {
            return PreimageDecay{false, 0.0, std::min(f.alpha.real(), f.beta.real()),
                                 2.0 + std::abs(f.alpha) + std::abs(f.beta)};
          },
          [](const Ltrunc& f) {
            return PreimageDecay{false, 0.0, std::min(f.alpha.real(), f.beta.real()),
                                 2.0 + 2.0 * (std::abs(f.alpha) + std::abs(f.beta))};
          },
          [](const BandLimited& f) { return PreimageDecay{true, f.halfwidth, 0.0, 0.0}; },
          [](const auto&) -> PreimageDecay { fail(ErrorKind::domain, "preimage_decay: unsupported kind"); },
      },
      fn);
}

TailAsymptotics tail_asymptotics(const TestFunction& fn) {
  validate(fn);
  const double pi2 = kPi * kPi;
  return std::visit(
      overloaded{
          [](const Q&) { return TailAsymptotics{0.0, 1.0}; },
          [&](const G&) { return TailAsymptotics{0.0, kB0 / pi2}; },
          [&](const Gk& f) { return TailAsymptotics{0.0, kB0 * f.k * f.k / pi2}; },
          [](const J&) { return TailAsymptotics{1.0 / (2.0 * kPi), 0.0}; },
          [](const WhatK&) { return TailAsymptotics{1.0 / (2.0 * kPi), 0.0}; },
          [&](const Ialpha& f) { return TailAsymptotics{kI / (2.0 * kPi), f.alpha / (4.0 * pi2)}; },
          [&](const L& f) {
            return TailAsymptotics{kI * (f.alpha - f.beta) / (2.0 * kPi),
                                   (f.alpha * f.alpha - f.beta * f.beta) / (8.0 * pi2)};
          },
          [&](const Ltrunc& f) {
            return TailAsymptotics{0.0, (f.alpha * f.alpha - f.beta * f.beta) / (8.0 * pi2)};
          },
          [](const Indicator&) { return TailAsymptotics{}; },
          [](const auto&) -> TailAsymptotics { fail(ErrorKind::domain, "tail_asymptotics: unsupported kind"); },
      },
      fn);
}

bool is_odd(const TestFunction& fn) {
  return std::holds_alternative<J>(fn) || std::holds_alternative<WhatK>(fn) || std::holds_alternative<Weps>(fn);
}

cplx periodized_sum(const TestFunction& fn, double offset, int period) {
  validate(fn);
  require(period >= 1, ErrorKind::domain, "periodized_sum: period must be >= 1");
  const double n = period;
  return std::visit(
      overloaded{
          [&](const Q&) -> cplx { return lattice_cot(cplx{offset, -1.0}, n).imag(); },
          [&](const G&) -> cplx { return periodized_G(1, offset, period); },
          [&](const Gk& f) -> cplx { return periodized_G(f.k, offset, period); },
          [&](const J&) -> cplx { return periodized_J(offset, period); },
          [&](const WhatK& f) -> cplx { return periodized_W(f.k, offset, period); },
          [&](const Ialpha& f) -> cplx {
            return kI / (2.0 * kPi) * lattice_cot(offset + kI * f.alpha / (2.0 * kPi), n);
          },
          [&](const L& f) -> cplx { return periodized_L(f, offset, period); },
          [&](const Ltrunc& f) -> cplx {
            return periodized_L(L{f.alpha, f.beta}, offset, period) -
                   kI * (f.alpha - f.beta) * periodized_W(f.k, offset, period);
          },
          [&](const Indicator& f) -> cplx {
            const double first = std::ceil((f.lo - offset) / n);
            const double last = std::floor((f.hi - offset) / n);
            double count = 0.0;
            for (double nu = first; nu <= last; nu += 1.0) {
              const double x = offset + n * nu;
              count += (x == f.lo || x == f.hi) ? 0.5 : 1.0;
            }
            return count;
          },
          [](const auto&) -> cplx {
            fail(ErrorKind::domain, "periodized_sum: no lattice-sum form; use the trace route");
          },
      },
      fn);
}

EnvelopeReport envelope_check(int k, std::span<const double> grid) {
  require(k >= 1, ErrorKind::domain, "envelope_check: k must be >= 1");
  require(!grid.empty(), ErrorKind::domain, "envelope_check: empty grid");
  EnvelopeReport rep;
  const TestFunction gk = Gk{k};
  for (const double xi : grid) {
    require(std::isfinite(xi), ErrorKind::domain, "envelope_check: non-finite grid point");
    const double g = eval(gk, xi).real();
    const double q = 1.0 / (1.0 + xi * xi);
    const double diff = std::abs(eval_J(xi) - what_closed_form(k, xi));
    rep.max_ratio_QG = std::max(rep.max_ratio_QG, q / g);
    rep.max_ratio_JW = std::max(rep.max_ratio_JW, diff / g);
  }
  return rep;
}

}  // namespace speclab::testfn
