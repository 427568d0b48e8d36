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

#include <complex>
#include <functional>
#include <istream>
#include <string>
#include <vector>

#include "speclab/linstat.hpp"
#include "speclab/testfn.hpp"

namespace speclab::zeta {

using cplx = std::complex<double>;

inline constexpr double kMaxHeight = 5.0e4;

struct ZeroTable {
  std::vector<double> ordinates;  // ascending, repeated for multiple zeros
  double height_min = 0.0;
  double height_max = 0.0;
  double stated_precision = 0.0;

  /// Lowest height below which every zero is present: 0 when the table
  /// starts at the first zero, height_min otherwise.
  double covered_from() const;
  /// Zeros in [a, b].
  std::size_t count_in(double a, double b) const;
};

enum class TableFormat {
  plain,         // one ordinate per line
  offset_block,  // "# offset <decimal>" then offsets from that value
};

/// Parses a zero table. Blank lines and CR line endings are ignored; in plain
/// format lines starting with '#' are comments. Throws ErrorKind::validation
/// naming the offending line.
ZeroTable ingest_zero_table(std::istream& in, TableFormat format);
ZeroTable read_zero_table(const std::string& path, TableFormat format);

/// Wraps already-validated ordinates.
ZeroTable make_table(std::vector<double> ordinates, double precision);

struct SamplingWindow {
  double T = 0.0;
  double t_low = 0.0;
  double t_high = 0.0;
  double density = 0.0;  // log T / 2pi
};

SamplingWindow make_window(double T);

/// Throws ErrorKind::domain unless [T - margin, 2T + margin] lies inside the table.
void check_coverage(const ZeroTable& table, const SamplingWindow& window, double margin);

struct ZetaValue {
  cplx value;
  double error = 0.0;  // estimate of the Euler-Maclaurin remainder
  int terms = 0;
};

/// zeta(s) by Euler-Maclaurin summation for Re s > 0, |Im s| <= 5e4.
ZetaValue zeta_em(cplx s, double tol = 1e-9);

/// Z(t) = e^{i theta(t)} zeta(1/2 + it).
double hardy_z(double t);

/// theta(t)/pi + 1, the smooth part of N(t).
double zero_count_estimate(double t);

/// Upper bound for |S(t)| (Trudgian): 0.112 log t + 0.278 log log t + 2.510.
double s_bound(double t);

struct LocateReport {
  std::vector<double> zeros;
  double estimate = 0.0;  // smooth count over [a, b]
  double step = 0.0;      // final grid step
};

/// Sign changes of Z on [a, b], refined to tol. The grid is halved until the
/// count lies within 2 of the smooth estimate.
LocateReport locate_zeros_report(double a, double b, double tol = 1e-9);
std::vector<double> locate_zeros(double a, double b, double tol = 1e-9);

/// Omega(xi) = Re digamma(1/4 + i xi/2) - log pi.
double omega(double xi);

double von_mangoldt(long long n);
/// Chebyshev psi(x) = sum_{n <= x} Lambda(n); x <= 1e9.
double psi(double x);

/// Compactly supported real test function for the explicit formula, with its
/// transform g^(gamma/2pi) = int g(x) e^{-i gamma x} dx.
struct ExplicitTestFn {
  std::string name;
  std::function<double(double)> g;
  std::function<cplx(double)> transform;
  /// Non-increasing bound on |transform(gamma)| for gamma >= 1.
  std::function<double(double)> envelope;
  double support = 0.0;     // g vanishes outside [-support, support]
  double exp_moment = 0.0;  // int (g(x) + g(-x)) e^{x/2} dx
  double l1_norm = 0.0;     // int |g|
};

/// Centered cardinal B-spline of order m (m boxes of width h, unit mass)
/// translated to c, times weight.
ExplicitTestFn bspline(int m, double h, double c, double weight = 1.0);

/// Linear combination of test functions.
ExplicitTestFn combine(const std::vector<ExplicitTestFn>& parts);

struct ExplicitSides {
  double zero_side = 0.0;
  double prime_side = 0.0;
  double residual = 0.0;
  double truncation_bound = 0.0;
  double cutoff = 0.0;  // zero ordinates used up to this height
  long zeros_used = 0;
};

/// Both sides of the explicit formula over every zero in the table (which
/// must start at the first zero).
ExplicitSides explicit_formula_sides(const ExplicitTestFn& g, const ZeroTable& table);

/// <eta, Z> for zeros rescaled as (log T/2pi)(gamma - t). Zeros are summed
/// over [t - H, t + H]; the reference integral covers the whole line.
/// raw = window sum + reference outside the window, so centered is the
/// window sum minus the window reference. halfwidth <= 0 picks the widest
/// window the table covers.
LinStatResult zero_linstat(const ZeroTable& table, const SamplingWindow& window, double t,
                           const testfn::TestFunction& fn, double halfwidth = 0.0);

struct ZeroEstimate {
  cplx value;
  double truncation_bound = 0.0;
  std::string route;
};

/// zeta(1/2 + alpha/log T + it) / zeta(1/2 + beta/log T + it) as
/// exp <L_{alpha,beta}, Z~>. Exact up to truncation when Re alpha, Re beta > 0.
ZeroEstimate zeta_ratio_from_zeros(const ZeroTable& table, const SamplingWindow& window, double t, cplx alpha,
                                   cplx beta, double halfwidth = 0.0);

/// (1/log T) zeta'/zeta(1/2 + alpha/log T + it) approximated by <I_alpha, Z~>.
ZeroEstimate zeta_logderiv_from_zeros(const ZeroTable& table, const SamplingWindow& window, double t, cplx alpha,
                                      double halfwidth = 0.0);

}  // namespace speclab::zeta
