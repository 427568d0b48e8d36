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
#include <span>
#include <vector>

namespace speclab::ratiodet {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 8;
inline constexpr double kMinSeparation = 1e-6;
inline constexpr double kMaxCondition = 1e12;

struct RatioSpec {
  std::vector<cplx> alphas;
  std::vector<cplx> betas;
};

/// Throws ErrorKind::domain unless 1 <= m <= 8, sizes agree, Re beta != 0 and
/// every |alpha_i - beta_j| >= 1e-6.
void validate(const RatioSpec& spec);

/// 1 when Re beta > 0, e^{-alpha + beta} when Re beta < 0.
cplx e_factor(cplx alpha, cplx beta);

/// Exact E over U(n) of prod Lambda(alpha_l/n)/Lambda(beta_l/n) as a ratio of
/// two m x m determinants in x_i = e^{alpha_i/n}, y_j = e^{beta_j/n}.
cplx finite_ratio_expectation(const RatioSpec& spec, int n);

/// The n -> infinity limit det(E(a_i, b_j)/(a_i - b_j)) / det(1/(a_i - b_j)).
cplx limit_ratio_expectation(const RatioSpec& spec);

/// det[1/(x_i - y_j)] by the closed product formula.
cplx cauchy_det(std::span<const cplx> x, std::span<const cplx> y);

/// Sine kernel sin(pi x)/(pi x) and its period-n analogue sin(pi x)/(n sin(pi x/n)).
double sine_kernel(double x);
double sine_kernel_n(int n, double x);

enum class Kernel { limit, finite };
/// det of the k x k matrix K(x_i - x_j); n is used only for Kernel::finite.
double sine_kernel_det(std::span<const double> points, Kernel kernel, int n = 0);

}  // namespace speclab::ratiodet
