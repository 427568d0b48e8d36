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

#include "speclab/cue.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "speclab/error.hpp"
#include "speclab/rng.hpp"
#include "speclab/special.hpp"

namespace speclab::cue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_n(int n) { require(n >= 1, ErrorKind::domain, "cue: n must be >= 1"); }

std::vector<double> dense_angles(int n, CounterRng& rng) {
  Eigen::MatrixXcd z(n, n);
  const double scale = std::sqrt(0.5);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = cplx(re, im) * scale;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(q, false);
  require(es.info() == Eigen::Success, ErrorKind::numeric, "cue: eigensolver did not converge");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = canonical_angle(std::arg(es.eigenvalues()[i]) / kTwoPi);
  std::sort(out.begin(), out.end());
  return out;
}

// Unwrapped Pruefer phase psi(phi) of u_{n-1} = e^{i psi} and its derivative.
// psi increases by 2 pi n over one turn of phi.
struct Phase {
  double psi;
  double dpsi;
};

Phase pruefer(double phi, std::span<const cplx> alpha) {
  const cplx z = std::polar(1.0, phi);
  cplx u = z;
  double d = 1.0;
  double arg = 0.0;
  for (const cplx a : alpha) {
    const cplx w = 1.0 - a * u;
    const double nw = std::norm(w);
    arg += std::atan2(w.imag(), w.real());
    d = 1.0 + d * (1.0 - std::norm(a)) / nw;
    u = z * (u - std::conj(a)) / w;
    u /= std::abs(u);
  }
  return {static_cast<double>(alpha.size() + 1) * phi - 2.0 * arg, d};
}

cplx log1m(cplx w) { return std::log(1.0 - w); }

}  // namespace

double canonical_angle(double theta) {
  double t = theta - std::floor(theta + 0.5);
  if (t >= 0.5) t -= 1.0;
  if (t < -0.5) t += 1.0;
  return t;
}

EigenangleSample make_sample(std::vector<double> angles, std::uint64_t seed, std::uint64_t index) {
  require(!angles.empty(), ErrorKind::domain, "cue: sample needs at least one angle");
  for (double& t : angles) {
    require(std::isfinite(t), ErrorKind::domain, "cue: non-finite angle");
    t = canonical_angle(t);
  }
  std::sort(angles.begin(), angles.end());
  EigenangleSample s;
  s.n = static_cast<int>(angles.size());
  s.angles = std::move(angles);
  s.seed = seed;
  s.index = index;
  return s;
}

Verblunsky sample_verblunsky(int n, std::uint64_t seed, std::uint64_t index) {
  require_n(n);
  CounterRng rng(seed, index);
  Verblunsky v;
  v.n = n;
  v.alpha.resize(n);
  for (int k = 0; k + 1 < n; ++k) {
    // |alpha_k|^2 ~ Beta(1, n - k - 1) by inversion.
    const double r2 = -std::expm1(std::log(rng.uniform_pos()) / (n - k - 1));
    v.alpha[k] = std::polar(std::sqrt(r2), kTwoPi * rng.uniform());
  }
  v.alpha[n - 1] = std::polar(1.0, kTwoPi * rng.uniform());
  return v;
}

std::vector<double> eigenangles(const Verblunsky& v) {
  const int n = v.n;
  const std::span<const cplx> inner(v.alpha.data(), n - 1);
  const double target = -std::arg(v.alpha[n - 1]);
  // Grid of n cells brackets every root; safeguarded Newton inside a cell.
  std::vector<double> gx(n + 1), gf(n + 1);
  for (int i = 0; i < n; ++i) {
    gx[i] = -kPi + kTwoPi * i / n;
    gf[i] = pruefer(gx[i], inner).psi;
  }
  gx[n] = kPi;
  gf[n] = gf[0] + kTwoPi * n;
  const double m0 = std::ceil((gf[0] - target) / kTwoPi);
  std::vector<double> out;
  out.reserve(n);
  int cell = 0;
  for (int j = 0; j < n; ++j) {
    const double c = target + kTwoPi * (m0 + j);
    while (cell + 1 < n && gf[cell + 1] <= c) ++cell;
    double lo = gx[cell];
    double hi = gx[cell + 1];
    double x = lo + (hi - lo) * (c - gf[cell]) / (gf[cell + 1] - gf[cell]);
    for (int it = 0; it < 200; ++it) {
      const Phase p = pruefer(x, inner);
      const double r = p.psi - c;
      if (r == 0.0) break;
      (r < 0.0 ? lo : hi) = x;
      double xn = x - r / p.dpsi;
      if (std::abs(xn - x) < 1e-14) {
        x = xn;
        break;
      }
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      if (hi - lo < 1e-15) break;
      x = xn;
    }
    out.push_back(canonical_angle(x / kTwoPi));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CharPoly char_poly(const Verblunsky& v, cplx z) {
  cplx p = 1.0, ps = 1.0, dp = 0.0, dps = 0.0;
  for (const cplx a : v.alpha) {
    const cplx zp = z * p;
    const cplx dzp = p + z * dp;
    const cplx np = zp - std::conj(a) * ps;
    const cplx nps = ps - a * zp;
    const cplx ndp = dzp - std::conj(a) * dps;
    const cplx ndps = dps - a * dzp;
    p = np;
    ps = nps;
    dp = ndp;
    dps = ndps;
  }
  return {p, dp};
}

cplx cot_trace(const Verblunsky& v, cplx y) {
  require(y.real() != 0.0, ErrorKind::domain, "cot_trace: Re y must be nonzero");
  const double n = v.n;
  const cplx s = std::exp(-kTwoPi * y / n);
  // Rescale while recursing so the log-derivative survives large |1/s|^n.
  const cplx z = 1.0 / s;
  cplx p = 1.0, ps = 1.0, dp = 0.0, dps = 0.0;
  for (const cplx a : v.alpha) {
    const cplx zp = z * p;
    const cplx dzp = p + z * dp;
    cplx np = zp - std::conj(a) * ps;
    cplx nps = ps - a * zp;
    cplx ndp = dzp - std::conj(a) * dps;
    cplx ndps = dps - a * dzp;
    const double m = std::max(std::abs(np), std::abs(nps));
    if (m > 1e100 || m < 1e-100) {
      np /= m;
      nps /= m;
      ndp /= m;
      ndps /= m;
    }
    p = np;
    ps = nps;
    dp = ndp;
    dps = ndps;
  }
  return kPi / n * kI * (n - 2.0 / s * (dp / p));
}

LinStatResult linstat_resolvent(const Verblunsky& v, const testfn::TestFunction& fn) {
  LinStatResult out;
  out.route = "resolvent";
  out.terms = v.n;
  if (std::holds_alternative<testfn::Q>(fn)) {
    out.raw = cot_trace(v, -1.0).imag();
  } else if (std::holds_alternative<testfn::J>(fn)) {
    const double y = 1.0 / kTwoPi;
    out.raw = (cot_trace(v, y) + cot_trace(v, -y)) / (4.0 * kPi);
  } else if (const auto* f = std::get_if<testfn::Ialpha>(&fn)) {
    testfn::validate(fn);
    out.raw = kI / kTwoPi * cot_trace(v, f->alpha / kTwoPi);
  } else {
    fail(ErrorKind::domain, "linstat_resolvent: supported kinds are Q, J and I_alpha");
  }
  out.reference = testfn::reference_integral(fn);
  out.centered = out.raw - out.reference;
  return out;
}

EigenangleSample sample_eigenangles(int n, std::uint64_t seed, std::uint64_t index, Sampler sampler) {
  require_n(n);
  EigenangleSample s;
  s.n = n;
  s.seed = seed;
  s.index = index;
  if (sampler == Sampler::dense) {
    CounterRng rng(seed, index);
    s.angles = dense_angles(n, rng);
  } else {
    s.angles = eigenangles(sample_verblunsky(n, seed, index));
  }
  return s;
}

cplx TraceVector::at(int j) const {
  if (j == 0) return static_cast<double>(n);
  const int a = std::abs(j);
  require(a <= jmax, ErrorKind::domain, "TraceVector: index beyond jmax");
  return j > 0 ? values[a - 1] : std::conj(values[a - 1]);
}

TraceVector traces(const EigenangleSample& s, int jmax) {
  require(jmax >= 1, ErrorKind::domain, "traces: jmax must be >= 1");
  TraceVector t;
  t.n = s.n;
  t.jmax = jmax;
  t.values.assign(jmax, cplx{0.0, 0.0});
  for (const double theta : s.angles) {
    for (int j = 1; j <= jmax; ++j) {
      const double frac = std::remainder(j * theta, 1.0);
      t.values[j - 1] += std::polar(1.0, kTwoPi * frac);
    }
  }
  return t;
}

int poisson_cutoff(const testfn::TestFunction& fn, int n, double tol) {
  require(tol > 0.0, ErrorKind::domain, "linstat_poisson: tol must be positive");
  const auto d = testfn::preimage_decay(fn);
  if (d.compact) return static_cast<int>(std::floor(n * d.halfwidth * (1.0 + 1e-15)));
  require(d.rate > 0.0, ErrorKind::numeric, "linstat_poisson: no decay rate for " + testfn::name(fn));
  // n * sum_{|j| > J} A e^{-rate |j|/N} = 2 n A e^{-rate (J+1)/N} / (1 - e^{-rate/N}) < tol
  const double q = -std::expm1(-d.rate / n);
  const double need = n / d.rate * std::log(2.0 * n * d.amplitude / (tol * q));
  require(need < 1e7, ErrorKind::numeric, "linstat_poisson: tolerance unreachable for " + testfn::name(fn));
  return std::max(0, static_cast<int>(std::ceil(need)) - 1);
}

LinStatResult linstat_poisson(const EigenangleSample& s, const testfn::TestFunction& fn, double tol) {
  testfn::validate(fn);
  const int n = s.n;
  const int jmax = poisson_cutoff(fn, n, tol);
  LinStatResult out;
  out.route = "poisson";
  out.terms = 2L * jmax + 1;
  out.reference = testfn::preimage(fn, 0.0);
  cplx centered{0.0, 0.0};
  if (jmax > 0) {
    const TraceVector t = traces(s, jmax);
    for (int j = 1; j <= jmax; ++j) {
      const double x = static_cast<double>(j) / n;
      centered += t.values[j - 1] * testfn::preimage(fn, -x) + std::conj(t.values[j - 1]) * testfn::preimage(fn, x);
    }
    centered /= static_cast<double>(n);
  }
  const auto d = testfn::preimage_decay(fn);
  if (!d.compact) {
    const double q = -std::expm1(-d.rate / n);
    out.truncation_bound = 2.0 * d.amplitude * std::exp(-d.rate * (jmax + 1) / n) / q;
  }
  out.centered = centered;
  out.raw = out.reference + centered;
  return out;
}

LinStatResult linstat(const EigenangleSample& s, const testfn::TestFunction& fn) {
  testfn::validate(fn);
  if (std::holds_alternative<testfn::BandLimited>(fn)) return linstat_poisson(s, fn);
  const int n = s.n;
  LinStatResult out;
  out.reference = testfn::symmetric_integral(fn);
  if (const auto* w = std::get_if<testfn::Weps>(&fn)) {
    out.route = "compact";
    for (const double theta : s.angles) {
      const double a = n * theta;
      const long lo = static_cast<long>(std::ceil((-w->eps - a) / n));
      const long hi = static_cast<long>(std::floor((w->eps - a) / n));
      for (long nu = lo; nu <= hi; ++nu) {
        out.raw += testfn::eval(fn, a + static_cast<double>(n) * nu);
        ++out.terms;
      }
    }
  } else {
    out.route = "lattice";
    for (const double theta : s.angles) out.raw += testfn::periodized_sum(fn, n * theta, n);
    out.terms = n;
  }
  out.centered = out.raw - out.reference;
  return out;
}

cplx char_ratio(const EigenangleSample& s, std::span<const cplx> alphas, std::span<const cplx> betas) {
  require(alphas.size() == betas.size(), ErrorKind::domain, "char_ratio: alphas and betas differ in length");
  const double n = s.n;
  cplx log_sum{0.0, 0.0};
  for (std::size_t l = 0; l < alphas.size(); ++l) {
    require(betas[l].real() != 0.0, ErrorKind::domain, "char_ratio: Re beta must be nonzero");
    const cplx ea = std::exp(-alphas[l] / n);
    const cplx eb = std::exp(-betas[l] / n);
    for (const double theta : s.angles) {
      const cplx lam = std::polar(1.0, kTwoPi * theta);
      log_sum += log1m(ea * lam) - log1m(eb * lam);
    }
  }
  return std::exp(log_sum);
}

cplx char_ratio_direct(const EigenangleSample& s, std::span<const cplx> alphas, std::span<const cplx> betas) {
  require(alphas.size() == betas.size(), ErrorKind::domain, "char_ratio: alphas and betas differ in length");
  const double n = s.n;
  cplx prod{1.0, 0.0};
  for (std::size_t l = 0; l < alphas.size(); ++l) {
    require(betas[l].real() != 0.0, ErrorKind::domain, "char_ratio: Re beta must be nonzero");
    const cplx ea = std::exp(-alphas[l] / n);
    const cplx eb = std::exp(-betas[l] / n);
    for (const double theta : s.angles) {
      const cplx lam = std::polar(1.0, kTwoPi * theta);
      prod *= (1.0 - ea * lam) / (1.0 - eb * lam);
    }
  }
  return prod;
}

cplx char_logderiv(const EigenangleSample& s, cplx alpha) {
  require(alpha.real() > 0.0, ErrorKind::domain, "char_logderiv: Re alpha must be > 0");
  const double n = s.n;
  cplx sum{0.0, 0.0};
  for (const double theta : s.angles) sum += 1.0 / special::expm1(alpha / n - kI * (kTwoPi * theta));
  return sum / n;
}

double correlation_statistic(const EigenangleSample& s, int k, const CorrelationEta& eta, double halfwidth) {
  require(k >= 1 && k <= 3, ErrorKind::domain, "correlation_sum: k must be 1, 2 or 3");
  require(halfwidth > 0.0 && halfwidth < 0.5 * s.n, ErrorKind::domain,
          "correlation_sum: window halfwidth must lie in (0, n/2)");
  std::vector<double> pts;
  for (const double theta : s.angles) {
    const double x = s.n * theta;
    if (std::abs(x) <= halfwidth) pts.push_back(x);
  }
  const std::size_t m = pts.size();
  double total = 0.0;
  std::array<double, 3> buf{};
  if (k == 1) {
    for (std::size_t i = 0; i < m; ++i) {
      buf[0] = pts[i];
      total += eta(std::span<const double>(buf.data(), 1));
    }
  } else if (k == 2) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        buf[0] = pts[i];
        buf[1] = pts[j];
        total += eta(std::span<const double>(buf.data(), 2));
      }
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        for (std::size_t l = 0; l < m; ++l) {
          if (l == i || l == j) continue;
          buf = {pts[i], pts[j], pts[l]};
          total += eta(std::span<const double>(buf.data(), 3));
        }
      }
    }
  }
  return total;
}

Estimate correlation_sum(std::span<const EigenangleSample> samples, int k, const CorrelationEta& eta,
                         double halfwidth) {
  require(!samples.empty(), ErrorKind::domain, "correlation_sum: no samples");
  double sum = 0.0, sum2 = 0.0;
  for (const auto& s : samples) {
    const double v = correlation_statistic(s, k, eta, halfwidth);
    sum += v;
    sum2 += v * v;
  }
  const double cnt = static_cast<double>(samples.size());
  Estimate e;
  e.samples = static_cast<long>(samples.size());
  e.mean = sum / cnt;
  if (samples.size() > 1) {
    const double var = std::max(0.0, (sum2 - cnt * e.mean * e.mean) / (cnt - 1.0));
    e.stderr_ = std::sqrt(var / cnt);
  }
  return e;
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(b, sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
  char b[sizeof(T)];
  if (!is.read(b, sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  std::memcpy(&v, b, sizeof(T));
  return true;
}

}  // namespace

void write_sample_cache(const std::string& path, std::span<const EigenangleSample> samples) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::io, "cannot open for writing: " + path);
  for (const auto& s : samples) {
    put<std::int64_t>(os, s.n);
    put<std::uint64_t>(os, s.seed);
    put<std::uint64_t>(os, s.index);
    for (const double t : s.angles) put<double>(os, t);
  }
  require(static_cast<bool>(os), ErrorKind::io, "write failed: " + path);
}

std::vector<EigenangleSample> read_sample_cache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorKind::io, "cannot open for reading: " + path);
  std::vector<EigenangleSample> out;
  std::int64_t n = 0;
  while (get(is, n)) {
    require(n >= 1 && n <= (1 << 24), ErrorKind::io, "corrupt sample cache: " + path);
    EigenangleSample s;
    s.n = static_cast<int>(n);
    require(get(is, s.seed) && get(is, s.index), ErrorKind::io, "truncated sample cache: " + path);
    s.angles.resize(n);
    for (auto& t : s.angles) require(get(is, t), ErrorKind::io, "truncated sample cache: " + path);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace speclab::cue
