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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "speclab/linstat.hpp"
#include "speclab/testfn.hpp"

namespace speclab::cue {

using cplx = std::complex<double>;

enum class Sampler {
  dense,       // Ginibre -> phase-fixed Householder QR -> dense eigensolver
  verblunsky,  // Killip-Nenciu coefficients -> paraorthogonal zeros
};

struct EigenangleSample {
  int n = 0;
  std::vector<double> angles;  // ascending, each in [-1/2, 1/2)
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

/// One Haar-unitary draw reduced to its eigenangles. Deterministic in
/// (n, seed, index, sampler).
EigenangleSample sample_eigenangles(int n, std::uint64_t seed, std::uint64_t index,
                                    Sampler sampler = Sampler::dense);

/// Wraps explicit angles (canonicalized and sorted) as a sample.
EigenangleSample make_sample(std::vector<double> angles, std::uint64_t seed = 0, std::uint64_t index = 0);

/// Maps an angle to [-1/2, 1/2), half-open at -1/2.
double canonical_angle(double theta);

/// Verblunsky coefficients alpha_0..alpha_{n-1} of a CUE(n) matrix in CMV
/// form; |alpha_k| < 1 for k < n-1 and |alpha_{n-1}| = 1.
struct Verblunsky {
  int n = 0;
  std::vector<cplx> alpha;
};

Verblunsky sample_verblunsky(int n, std::uint64_t seed, std::uint64_t index);

/// Zeros of the paraorthogonal polynomial, as sorted eigenangles.
std::vector<double> eigenangles(const Verblunsky& v);

/// The characteristic polynomial det(z - g) and its derivative at z.
struct CharPoly {
  cplx value;
  cplx derivative;
};
CharPoly char_poly(const Verblunsky& v, cplx z);

/// sum_i (pi/N) cot(pi(theta_i + i y/N)) for complex y with Re y != 0,
/// from the log-derivative of the characteristic polynomial.
cplx cot_trace(const Verblunsky& v, cplx y);

/// Linear statistic for Q, J and Ialpha from the characteristic polynomial,
/// without computing eigenangles.
LinStatResult linstat_resolvent(const Verblunsky& v, const testfn::TestFunction& fn);

struct TraceVector {
  int n = 0;
  int jmax = 0;
  std::vector<cplx> values;  // values[j - 1] = Tr(g^j)

  cplx at(int j) const;  // any integer j, using Tr(g^-j) = conj Tr(g^j) and Tr(g^0) = n
};

TraceVector traces(const EigenangleSample& s, int jmax);

/// Direct periodized statistic. Kinds with a lattice closed form are summed
/// exactly; BandLimited is routed through linstat_poisson.
LinStatResult linstat(const EigenangleSample& s, const testfn::TestFunction& fn);
inline cplx linstat(const EigenangleSample& s, const testfn::TestFunction& fn, LinStatMode mode) {
  return linstat(s, fn).value(mode);
}

/// Poisson-summation route (1/N) sum_j Tr(g^j) F(-j/N), truncated at
/// |j| <= Jmax with n * sum_{|j| > Jmax} |F(j/N)| < tol.
LinStatResult linstat_poisson(const EigenangleSample& s, const testfn::TestFunction& fn, double tol = 1e-13);

/// Jmax used by linstat_poisson.
int poisson_cutoff(const testfn::TestFunction& fn, int n, double tol);

/// prod_l Lambda(alpha_l/N) / Lambda(beta_l/N), Lambda(A) = det(1 - e^{-A} g),
/// summed in log space.
cplx char_ratio(const EigenangleSample& s, std::span<const cplx> alphas, std::span<const cplx> betas);

/// Same ratio multiplied out factor by factor.
cplx char_ratio_direct(const EigenangleSample& s, std::span<const cplx> alphas, std::span<const cplx> betas);

/// (1/N) sum_i 1/(e^{alpha/N - i 2 pi theta_i} - 1) for Re alpha > 0.
cplx char_logderiv(const EigenangleSample& s, cplx alpha);

/// k-variate test function evaluated on rescaled points.
using CorrelationEta = std::function<double(std::span<const double>)>;

/// Sum of eta over ordered k-tuples of distinct points N theta_i lying in
/// [-halfwidth, halfwidth]; halfwidth < n/2 so each eigenangle contributes at
/// most one periodized point.
double correlation_statistic(const EigenangleSample& s, int k, const CorrelationEta& eta, double halfwidth);

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
};
Estimate correlation_sum(std::span<const EigenangleSample> samples, int k, const CorrelationEta& eta,
                         double halfwidth);

/// Binary replay cache: per sample int64 n, uint64 seed, uint64 index, then n
/// little-endian doubles.
void write_sample_cache(const std::string& path, std::span<const EigenangleSample> samples);
std::vector<EigenangleSample> read_sample_cache(const std::string& path);

}  // namespace speclab::cue
