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

namespace speclab::special {

using cplx = std::complex<double>;

/// Digamma on the complex plane. Shifts the argument upward by recurrence
/// until |z| >= 8, then applies the Stirling series through B_20.
/// Requires z away from the non-positive integers.
cplx digamma(cplx z);

double digamma(double x);

/// Log-gamma on the branch continuous from the positive real axis.
/// Valid for Re z > 0.
cplx log_gamma(cplx z);

/// Riemann-Siegel theta: Im log Gamma(1/4 + it/2) - (t/2) log pi.
double riemann_siegel_theta(double t);

/// Hurwitz zeta sum_{k>=0} (k + x)^{-s} for real s > 1, x > 0.
double hurwitz_zeta(double s, double x);

/// B_{2k} for k = 0..kMaxBernoulli.
inline constexpr int kMaxBernoulli = 30;
double bernoulli_even(int k);

/// e^z - 1 without cancellation near z = 0.
cplx expm1(cplx z);

/// sin(x)/x with the removable point filled in.
double sinc(double x);
cplx sinc(cplx z);

}  // namespace speclab::special
