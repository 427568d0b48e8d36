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

#include "speclab/zeta.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "speclab/error.hpp"
#include "speclab/special.hpp"

namespace speclab::zeta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr cplx kI{0.0, 1.0};
constexpr double kFirstZero = 14.134725141734693;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parses a decimal and reports its number of fractional digits.
bool parse_decimal(const std::string& s, double& value, int& decimals) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto r = std::from_chars(first, last, value);
  if (r.ec != std::errc{} || r.ptr != last || !std::isfinite(value)) return false;
  decimals = 0;
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::size_t i = dot + 1;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++decimals;
      ++i;
    }
  }
  return true;
}

[[noreturn]] void bad_line(long line, const std::string& what) {
  fail(ErrorKind::validation, "zero table line " + std::to_string(line) + ": " + what);
}

double integrate(const std::function<double(double)>& f, double a, double b, double* err = nullptr) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-11, &e);
  if (err) *err += e;
  return v;
}

cplx integrate_c(const std::function<cplx(double)>& f, double a, double b, double* err) {
  const double re = integrate([&](double u) { return f(u).real(); }, a, b, err);
  const double im = integrate([&](double u) { return f(u).imag(); }, a, b, err);
  return {re, im};
}

cplx integrate_c_tail(const std::function<cplx(double)>& f, double a, double* err) {
  boost::math::quadrature::exp_sinh<double> es;
  double e1 = 0.0, e2 = 0.0;
  const double re = es.integrate([&](double v) { return f(a + v).real(); }, 0.0,
                                 std::numeric_limits<double>::infinity(), 1e-10, &e1);
  const double im = es.integrate([&](double v) { return f(a + v).imag(); }, 0.0,
                                 std::numeric_limits<double>::infinity(), 1e-10, &e2);
  if (err) *err += std::abs(e1 * re) + std::abs(e2 * im);
  return {re, im};
}

// Integral over consecutive breakpoints.
cplx integrate_panels(const std::function<cplx(double)>& f, std::vector<double> pts, double* err) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate_c(f, pts[i], pts[i + 1], err);
  return sum;
}

// Support of eta on the rescaled axis, when compact.
bool compact_support(const testfn::TestFunction& fn, double& lo, double& hi) {
  if (const auto* f = std::get_if<testfn::Indicator>(&fn)) {
    lo = f->lo;
    hi = f->hi;
    return true;
  }
  if (const auto* f = std::get_if<testfn::Weps>(&fn)) {
    lo = -f->eps;
    hi = f->eps;
    return true;
  }
  return false;
}

// Points on the rescaled axis where eta has a jump or a kink.
std::vector<double> special_points(const testfn::TestFunction& fn) {
  std::vector<double> pts{0.0};
  double lo = 0.0, hi = 0.0;
  if (compact_support(fn, lo, hi)) {
    pts.push_back(lo);
    pts.push_back(hi);
  }
  auto cuts = [&](cplx alpha, cplx beta) {
    const cplx a = alpha / kTwoPi, b = beta / kTwoPi;
    pts.push_back(a.imag());
    pts.push_back(b.imag());
    if (a.real() != b.real()) pts.push_back(-(a * std::conj(b)).imag() / (a.real() - b.real()));
  };
  if (const auto* f = std::get_if<testfn::L>(&fn)) cuts(f->alpha, f->beta);
  if (const auto* f = std::get_if<testfn::Ltrunc>(&fn)) cuts(f->alpha, f->beta);
  return pts;
}

// Total variation of eta on [x0, inf) in the direction sign, plus |eta(x0)|.
double tail_variation(const testfn::TestFunction& fn, double x0, double sign) {
  constexpr double kStep = 0.05;
  constexpr int kSteps = 4000;
  double prev = std::abs(testfn::eval(fn, sign * x0));
  double tv = prev;
  double tail_max = 0.0;
  cplx last = testfn::eval(fn, sign * x0);
  for (int i = 1; i <= kSteps; ++i) {
    const cplx v = testfn::eval(fn, sign * (x0 + kStep * i));
    tv += std::abs(v - last);
    last = v;
    if (i > kSteps - 400) tail_max = std::max(tail_max, std::abs(v));
  }
  const double x1 = x0 + kStep * kSteps;
  const auto t = testfn::tail_asymptotics(fn);
  return tv + 2.0 * (std::abs(t.a1) / x1 + std::abs(t.a2) / (x1 * x1)) + 4.0 * tail_max;
}

}  // namespace

double ZeroTable::covered_from() const {
  if (!ordinates.empty() && ordinates.front() < kFirstZero + 1e-3) return 0.0;
  return height_min;
}

std::size_t ZeroTable::count_in(double a, double b) const {
  const auto lo = std::lower_bound(ordinates.begin(), ordinates.end(), a);
  const auto hi = std::upper_bound(ordinates.begin(), ordinates.end(), b);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

ZeroTable ingest_zero_table(std::istream& in, TableFormat format) {
  ZeroTable table;
  std::string raw;
  long line = 0;
  bool have_offset = false;
  double offset = 0.0;
  int min_decimals = 1000;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (format == TableFormat::offset_block && !have_offset) {
      std::istringstream hs(s);
      std::string hash, word, num;
      hs >> hash >> word >> num;
      int dec = 0;
      std::string rest;
      if (hash != "#" || word != "offset" || !parse_decimal(num, offset, dec) || (hs >> rest)) {
        bad_line(line, "expected header '# offset <decimal>', got '" + s + "'");
      }
      have_offset = true;
      continue;
    }
    if (s[0] == '#') {
      if (format == TableFormat::plain) continue;
      bad_line(line, "unexpected comment after the offset header");
    }
    double v = 0.0;
    int dec = 0;
    if (!parse_decimal(s, v, dec)) bad_line(line, "malformed decimal '" + s + "'");
    v += offset;
    if (!(v > 0.0)) bad_line(line, "ordinate must be positive");
    min_decimals = std::min(min_decimals, dec);
    const double prec = std::max(std::pow(10.0, -dec), 4.0 * std::numeric_limits<double>::epsilon() * v);
    if (!table.ordinates.empty() && v < table.ordinates.back() - prec) {
      std::ostringstream os;
      os.precision(17);
      os << "ordinate " << v << " is below the previous " << table.ordinates.back();
      bad_line(line, os.str());
    }
    table.ordinates.push_back(v);
  }
  if (format == TableFormat::offset_block && !have_offset) fail(ErrorKind::validation, "zero table: missing offset header");
  require(!table.ordinates.empty(), ErrorKind::validation, "zero table: no ordinates");
  table.height_min = table.ordinates.front();
  table.height_max = table.ordinates.back();
  table.stated_precision =
      std::max(std::pow(10.0, -min_decimals), 4.0 * std::numeric_limits<double>::epsilon() * table.height_max);
  return table;
}

ZeroTable read_zero_table(const std::string& path, TableFormat format) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::io, "cannot open zero table '" + path + "'");
  return ingest_zero_table(in, format);
}

ZeroTable make_table(std::vector<double> ordinates, double precision) {
  require(!ordinates.empty(), ErrorKind::validation, "zero table: no ordinates");
  for (std::size_t i = 1; i < ordinates.size(); ++i) {
    require(ordinates[i] >= ordinates[i - 1] - precision, ErrorKind::validation, "zero table: ordinates not ascending");
  }
  ZeroTable t;
  t.ordinates = std::move(ordinates);
  t.height_min = t.ordinates.front();
  t.height_max = t.ordinates.back();
  t.stated_precision = precision;
  return t;
}

SamplingWindow make_window(double T) {
  require(T >= 2.0, ErrorKind::domain, "sampling window: T must be >= 2");
  return {T, T, 2.0 * T, std::log(T) / kTwoPi};
}

void check_coverage(const ZeroTable& table, const SamplingWindow& window, double margin) {
  require(window.t_low - margin >= table.covered_from() && window.t_high + margin <= table.height_max,
          ErrorKind::domain, "sampling window [T, 2T] plus margin is not covered by the zero table");
}

ZetaValue zeta_em(cplx s, double tol) {
  require(s.real() > 0.0, ErrorKind::domain, "zeta_em: requires Re s > 0");
  require(std::abs(s - 1.0) > 1e-8, ErrorKind::domain, "zeta_em: too close to the pole at s = 1");
  require(std::abs(s.imag()) <= kMaxHeight, ErrorKind::domain, "zeta_em: |Im s| beyond 5e4");
  // With N near |s|/pi the correction terms shrink roughly like 4^{-k}.
  int n = 10 + static_cast<int>(std::ceil(std::abs(s) / kPi));
  for (int attempt = 0; attempt < 6; ++attempt, n *= 2) {
    cplx sum{0.0, 0.0};
    for (int j = 1; j < n; ++j) sum += std::exp(-s * std::log(static_cast<double>(j)));
    const double nn = n;
    const cplx nms = std::exp(-s * std::log(nn));
    sum += nn * nms / (s - 1.0) + 0.5 * nms;
    cplx q = s / (2.0 * nn);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < special::kMaxBernoulli; ++k) {
      const cplx term = special::bernoulli_even(k) * q * nms;
      const double mag = std::abs(term);
      if (mag > prev) break;  // asymptotic regime ended before tol
      sum += term;
      prev = mag;
      const cplx next = q * (s + (2.0 * k - 1.0)) * (s + 2.0 * k) / ((2.0 * k + 1.0) * (2.0 * k + 2.0) * nn * nn);
      const double next_mag = std::abs(special::bernoulli_even(k + 1) * next * nms);
      const double err = next_mag * std::abs(s + (2.0 * k + 1.0)) / (s.real() + 2.0 * k + 1.0);
      if (err < tol) return {sum, err, n};
      q = next;
    }
  }
  fail(ErrorKind::numeric, "zeta_em: tolerance not reached");
}

double hardy_z(double t) {
  require(t >= 0.0 && t <= kMaxHeight, ErrorKind::domain, "hardy_z: t outside [0, 5e4]");
  const cplx z = zeta_em(cplx{0.5, t}, 1e-12).value;
  return (std::polar(1.0, special::riemann_siegel_theta(t)) * z).real();
}

double zero_count_estimate(double t) { return special::riemann_siegel_theta(t) / kPi + 1.0; }

double s_bound(double t) {
  const double lt = std::log(std::max(t, std::exp(1.0)));
  return 0.112 * lt + 0.278 * std::log(lt) + 2.510;
}

LocateReport locate_zeros_report(double a, double b, double tol) {
  require(a >= 0.0 && b >= a && b <= kMaxHeight, ErrorKind::domain, "locate_zeros: need 0 <= a <= b <= 5e4");
  require(tol >= 1e-9, ErrorKind::domain, "locate_zeros: tol must be >= 1e-9");
  const auto smooth = [](double t) { return t < kFirstZero ? 0.0 : zero_count_estimate(t); };
  LocateReport rep;
  rep.estimate = smooth(b) - smooth(a);
  double divisor = 10.0;
  for (int attempt = 0; attempt < 5; ++attempt, divisor *= 2.0) {
    std::vector<std::pair<double, double>> brackets;
    std::vector<std::pair<double, double>> values;
    double t = a;
    double zt = hardy_z(t);
    double min_step = std::numeric_limits<double>::infinity();
    while (t < b) {
      const double spacing = kTwoPi / std::log(std::max(t, 40.0) / kTwoPi);
      const double step = spacing / divisor;
      min_step = std::min(min_step, step);
      const double u = std::min(b, t + step);
      const double zu = hardy_z(u);
      if (zt == 0.0) {
        brackets.emplace_back(t, t);
      } else if ((zt < 0.0) != (zu < 0.0) && zu != 0.0) {
        brackets.emplace_back(t, u);
        values.emplace_back(zt, zu);
      }
      t = u;
      zt = zu;
    }
    if (zt == 0.0) brackets.emplace_back(b, b);
    rep.step = min_step;
    if (std::abs(static_cast<double>(brackets.size()) - rep.estimate) > 2.0) continue;
    rep.zeros.clear();
    std::size_t vi = 0;
    for (const auto& [lo, hi] : brackets) {
      if (lo == hi) {
        rep.zeros.push_back(lo);
        continue;
      }
      const auto [flo, fhi] = values[vi++];
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(
          [](double x) { return hardy_z(x); }, lo, hi, flo, fhi,
          [tol](double x, double y) { return std::abs(y - x) <= tol; }, iters);
      rep.zeros.push_back(0.5 * (r.first + r.second));
    }
    return rep;
  }
  fail(ErrorKind::numeric, "locate_zeros: sign-change count differs from the smooth estimate by more than 2");
}

std::vector<double> locate_zeros(double a, double b, double tol) { return locate_zeros_report(a, b, tol).zeros; }

double omega(double xi) { return special::digamma(cplx{0.25, 0.5 * xi}).real() - std::log(kPi); }

double von_mangoldt(long long n) {
  require(n >= 1, ErrorKind::domain, "von_mangoldt: n must be >= 1");
  if (n == 1) return 0.0;
  long long p = n;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  long long m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

double psi(double x) {
  require(x >= 0.0 && x <= 1e9, ErrorKind::domain, "psi: x outside [0, 1e9]");
  const long long n = static_cast<long long>(std::floor(x));
  if (n < 2) return 0.0;
  const long long root = static_cast<long long>(std::sqrt(static_cast<double>(n))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<long long> base;
  for (long long i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (long long j = i * i; j <= root; j += i) small[j] = 0;
  }
  // Segmented sieve; each prime p contributes log p per power p^e <= n.
  constexpr long long kSegment = 1 << 18;
  std::vector<char> seg(kSegment);
  double total = 0.0;
  for (long long lo = 2; lo <= n; lo += kSegment) {
    const long long hi = std::min(n, lo + kSegment - 1);
    std::fill(seg.begin(), seg.begin() + (hi - lo + 1), 1);
    for (const long long p : base) {
      if (p * p > hi) break;
      long long start = std::max(p * p, (lo + p - 1) / p * p);
      for (long long j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (long long i = lo; i <= hi; ++i) {
      if (!seg[i - lo]) continue;
      int e = 1;
      for (long long pw = i; pw <= n / i; pw *= i) ++e;
      total += e * std::log(static_cast<double>(i));
    }
  }
  return total;
}

ExplicitTestFn bspline(int m, double h, double c, double weight) {
  require(m >= 1 && m <= 20 && h > 0.0, ErrorKind::domain, "bspline: need 1 <= m <= 20 and h > 0");
  ExplicitTestFn f;
  std::ostringstream name;
  name << "bspline(m=" << m << ",h=" << h << ",c=" << c << ",w=" << weight << ")";
  f.name = name.str();
  f.support = 0.5 * m * h + std::abs(c);
  f.l1_norm = std::abs(weight);
  f.g = [m, h, c, weight](double x) {
    const double y = (x - c) / h + 0.5 * m;
    if (y < 0.0 || y > m) return 0.0;
    if (m == 1) return (y == 0.0 || y == 1.0 ? 0.5 : 1.0) * weight / h;
    double sum = 0.0, binom = 1.0;
    for (int k = 0; k <= m && k < y; ++k) {
      sum += ((k % 2) ? -binom : binom) * std::pow(y - k, m - 1);
      binom = binom * (m - k) / (k + 1);
    }
    return weight * sum / (std::tgamma(static_cast<double>(m)) * h);
  };
  f.transform = [m, h, c, weight](double gamma) {
    return weight * std::pow(special::sinc(0.5 * h * gamma), m) * std::polar(1.0, -c * gamma);
  };
  f.envelope = [m, h, weight](double gamma) {
    return std::abs(weight) * std::min(1.0, std::pow(2.0 / (h * std::abs(gamma)), m));
  };
  f.exp_moment = weight * 2.0 * std::cosh(0.5 * c) * std::pow(std::sinh(0.25 * h) / (0.25 * h), m);
  return f;
}

ExplicitTestFn combine(const std::vector<ExplicitTestFn>& parts) {
  require(!parts.empty(), ErrorKind::domain, "combine: no parts");
  ExplicitTestFn f;
  for (const auto& p : parts) {
    f.name += (f.name.empty() ? "" : "+") + p.name;
    f.support = std::max(f.support, p.support);
    f.exp_moment += p.exp_moment;
    f.l1_norm += p.l1_norm;
  }
  f.g = [parts](double x) {
    double s = 0.0;
    for (const auto& p : parts) s += p.g(x);
    return s;
  };
  f.transform = [parts](double gamma) {
    cplx s{0.0, 0.0};
    for (const auto& p : parts) s += p.transform(gamma);
    return s;
  };
  f.envelope = [parts](double gamma) {
    double s = 0.0;
    for (const auto& p : parts) s += p.envelope(gamma);
    return s;
  };
  return f;
}

ExplicitSides explicit_formula_sides(const ExplicitTestFn& g, const ZeroTable& table) {
  require(table.covered_from() == 0.0, ErrorKind::domain, "explicit formula: table must start at the first zero");
  ExplicitSides out;
  // Stop where the envelope is negligible; the remainder is bounded below.
  double cut = table.height_max;
  for (double x = 100.0; x < table.height_max; x *= 1.25) {
    if (g.envelope(x) < 1e-17) {
      cut = x;
      break;
    }
  }
  out.cutoff = cut;
  double zero_sum = 0.0, magnitude = 0.0;
  for (const double gamma : table.ordinates) {
    if (gamma > cut) break;
    const double v = 2.0 * g.transform(gamma).real();
    zero_sum += v;
    magnitude += std::abs(v);
    ++out.zeros_used;
  }
  double quad_err = 0.0;
  double integral = 0.0;
  const auto dens = [&](double xi) { return 2.0 * g.transform(xi).real() * omega(xi) / kTwoPi; };
  constexpr double kPanel = 2.0;
  for (double a = 0.0; a < cut; a += kPanel) {
    const double v = integrate(dens, a, std::min(cut, a + kPanel), &quad_err);
    integral += v;
    magnitude += std::abs(v);
  }
  out.zero_side = zero_sum - integral;

  double primes = 0.0;
  const long long nmax = static_cast<long long>(std::floor(std::exp(g.support)));
  for (long long n = 2; n <= nmax; ++n) {
    const double lam = von_mangoldt(n);
    if (lam == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    primes += lam * (g.g(ln) + g.g(-ln)) / std::sqrt(static_cast<double>(n));
  }
  out.prime_side = g.exp_moment - primes;
  out.residual = out.zero_side - out.prime_side;

  // Zeros and density beyond the cutoff, by partial summation against
  // N(t) = theta(t)/pi + 1 + S(t) + O(1/t) with theta' = Omega/2.
  const double f_cut = g.envelope(cut);
  boost::math::quadrature::exp_sinh<double> es;
  const double tail_int = es.integrate(
      [&](double v) {
        const double x = cut + v;
        const double lx = std::log(x);
        return g.envelope(x) * (2.0 * omega(x) / kTwoPi + 0.112 / x + 0.278 / (x * lx));
      },
      0.0, std::numeric_limits<double>::infinity());
  const double tail = 2.0 * (2.0 * f_cut * (s_bound(cut) + 0.25) + tail_int);
  const double shift = 2.0 * table.stated_precision * g.support * g.l1_norm * static_cast<double>(out.zeros_used);
  const double rounding = 1e-14 * (magnitude + std::abs(g.exp_moment) + std::abs(primes));
  out.truncation_bound = tail + quad_err + shift + rounding;
  return out;
}

LinStatResult zero_linstat(const ZeroTable& table, const SamplingWindow& window, double t,
                           const testfn::TestFunction& fn, double halfwidth) {
  testfn::validate(fn);
  const double slack = 1e-9 * window.T;
  require(t >= window.t_low - slack && t <= window.t_high + slack, ErrorKind::domain,
          "zero_linstat: t outside the sampling window [T, 2T]");
  const double hmax = std::min(t - table.covered_from(), table.height_max - t);
  require(hmax > 0.0, ErrorKind::domain, "zero_linstat: table does not cover t");
  require(halfwidth <= hmax, ErrorKind::domain, "zero_linstat: requested halfwidth exceeds table coverage");
  const double h = halfwidth > 0.0 ? halfwidth : hmax;
  const double dens = window.density;

  LinStatResult out;
  out.route = "window";
  const auto lo = std::lower_bound(table.ordinates.begin(), table.ordinates.end(), t - h);
  const auto hi = std::upper_bound(table.ordinates.begin(), table.ordinates.end(), t + h);
  cplx sum{0.0, 0.0};
  for (auto it = lo; it < hi; ++it) sum += testfn::eval(fn, dens * (*it - t));
  out.terms = hi > lo ? static_cast<long>(hi - lo) : 0;

  const auto f = [&](double u) { return testfn::eval(fn, dens * u) * omega(t + u) / kTwoPi; };
  double err = 0.0;
  std::vector<double> pts;
  double slo = 0.0, shi = 0.0;
  const bool compact = compact_support(fn, slo, shi);
  const double ulo = compact ? std::max(-h, slo / dens) : -h;
  const double uhi = compact ? std::min(h, shi / dens) : h;
  if (ulo < uhi) {
    pts = {ulo, uhi};
    for (const double x : special_points(fn)) {
      const double u = x / dens;
      if (u > ulo && u < uhi) pts.push_back(u);
    }
    for (double r = 0.25 / dens; r < h; r *= 2.0) {
      if (r > ulo && r < uhi) pts.push_back(r);
      if (-r > ulo && -r < uhi) pts.push_back(-r);
    }
    out.centered = sum - integrate_panels(f, pts, &err);
  } else {
    out.centered = sum;
  }

  cplx outer{0.0, 0.0};
  const bool outer_zero = compact && slo >= -dens * h && shi <= dens * h;
  if (!outer_zero) {
    const auto pair = [&](double u) {
      return (testfn::eval(fn, dens * u) * omega(t + u) + testfn::eval(fn, -dens * u) * omega(t - u)) / kTwoPi;
    };
    outer = integrate_c_tail(pair, h, &err);
  }
  out.raw = sum + outer;
  out.reference = out.raw - out.centered;

  double bound = err;
  if (!outer_zero) {
    const double sb = s_bound(t + h) + 0.25;
    bound += sb * (tail_variation(fn, dens * h, 1.0) + tail_variation(fn, dens * h, -1.0));
  }
  out.truncation_bound = bound;
  return out;
}

ZeroEstimate zeta_ratio_from_zeros(const ZeroTable& table, const SamplingWindow& window, double t, cplx alpha,
                                   cplx beta, double halfwidth) {
  require(beta.real() != 0.0, ErrorKind::domain, "zeta_ratio_from_zeros: Re beta must be nonzero");
  if (alpha == beta) return {cplx{1.0, 0.0}, 0.0, "identity"};
  const auto r = zero_linstat(table, window, t, testfn::L{alpha, beta}, halfwidth);
  ZeroEstimate out;
  out.value = std::exp(r.centered);
  out.truncation_bound = std::abs(out.value) * std::expm1(r.truncation_bound);
  out.route = (alpha.real() > 0.0 && beta.real() > 0.0) ? "exact" : "first-order";
  return out;
}

ZeroEstimate zeta_logderiv_from_zeros(const ZeroTable& table, const SamplingWindow& window, double t, cplx alpha,
                                      double halfwidth) {
  require(alpha.real() > 0.0, ErrorKind::domain, "zeta_logderiv_from_zeros: Re alpha must be > 0");
  const auto r = zero_linstat(table, window, t, testfn::Ialpha{alpha}, halfwidth);
  return {r.centered, r.truncation_bound, "first-order"};
}

}  // namespace speclab::zeta
