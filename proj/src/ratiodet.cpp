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

#include "speclab/ratiodet.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "speclab/error.hpp"
#include "speclab/special.hpp"

namespace speclab::ratiodet {

namespace {

constexpr double kPi = std::numbers::pi;

// det of a small complex matrix after row and column equilibration. Fails
// when the equilibrated matrix is numerically singular.
cplx scaled_det(Eigen::MatrixXcd m) {
  const Eigen::Index k = m.rows();
  cplx scale{1.0, 0.0};
  for (Eigen::Index i = 0; i < k; ++i) {
    const double r = m.row(i).cwiseAbs().maxCoeff();
    if (r == 0.0) return 0.0;
    m.row(i) /= r;
    scale *= r;
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    const double c = m.col(j).cwiseAbs().maxCoeff();
    if (c == 0.0) return 0.0;
    m.col(j) /= c;
    scale *= c;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(k - 1);
  require(smin > 0.0 && sv(0) / smin <= kMaxCondition, ErrorKind::numeric,
          "ratio determinant: condition number exceeds 1e12");
  return Eigen::FullPivLU<Eigen::MatrixXcd>(m).determinant() * scale;
}

// e^a - e^b without cancellation when a is close to b.
cplx exp_diff(cplx a, cplx b) { return std::exp(b) * special::expm1(a - b); }

}  // namespace

void validate(const RatioSpec& spec) {
  const std::size_t m = spec.alphas.size();
  require(m >= 1 && m <= static_cast<std::size_t>(kMaxOrder), ErrorKind::domain, "RatioSpec: need 1 <= m <= 8");
  require(spec.betas.size() == m, ErrorKind::domain, "RatioSpec: alphas and betas differ in length");
  for (const cplx b : spec.betas) {
    require(b.real() != 0.0, ErrorKind::domain, "RatioSpec: Re beta must be nonzero");
  }
  for (const cplx a : spec.alphas) {
    for (const cplx b : spec.betas) {
      require(std::abs(a - b) >= kMinSeparation, ErrorKind::domain, "RatioSpec: alpha_i and beta_j closer than 1e-6");
    }
  }
}

cplx e_factor(cplx alpha, cplx beta) {
  require(beta.real() != 0.0, ErrorKind::domain, "e_factor: Re beta must be nonzero");
  return beta.real() > 0.0 ? cplx{1.0, 0.0} : std::exp(beta - alpha);
}

cplx cauchy_det(std::span<const cplx> x, std::span<const cplx> y) {
  require(x.size() == y.size() && !x.empty(), ErrorKind::domain, "cauchy_det: size mismatch");
  const std::size_t m = x.size();
  cplx num{1.0, 0.0}, den{1.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) num *= (x[j] - x[i]) * (y[i] - y[j]);
    for (std::size_t j = 0; j < m; ++j) den *= x[i] - y[j];
  }
  return num / den;
}

cplx finite_ratio_expectation(const RatioSpec& spec, int n) {
  validate(spec);
  require(n >= 1, ErrorKind::domain, "finite_ratio_expectation: n must be >= 1");
  const std::size_t m = spec.alphas.size();
  const double nn = n;
  Eigen::MatrixXcd num(m, m);
  cplx den_num{1.0, 0.0}, den_den{1.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    const cplx a = spec.alphas[i] / nn;
    for (std::size_t j = 0; j < m; ++j) {
      const cplx b = spec.betas[j] / nn;
      const cplx d = exp_diff(a, b);
      num(i, j) = e_factor(spec.alphas[i], spec.betas[j]) / d;
      den_den *= d;
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      den_num *= exp_diff(spec.alphas[j] / nn, a) * exp_diff(spec.betas[i] / nn, spec.betas[j] / nn);
    }
  }
  const cplx den = den_num / den_den;
  require(std::abs(den) > 0.0, ErrorKind::numeric, "finite_ratio_expectation: coincident alphas or betas");
  return scaled_det(num) / den;
}

cplx limit_ratio_expectation(const RatioSpec& spec) {
  validate(spec);
  const std::size_t m = spec.alphas.size();
  Eigen::MatrixXcd num(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      num(i, j) = e_factor(spec.alphas[i], spec.betas[j]) / (spec.alphas[i] - spec.betas[j]);
    }
  }
  const cplx den = cauchy_det(spec.alphas, spec.betas);
  require(std::abs(den) > 0.0, ErrorKind::numeric, "limit_ratio_expectation: coincident alphas or betas");
  return scaled_det(num) / den;
}

double sine_kernel(double x) { return special::sinc(kPi * x); }

double sine_kernel_n(int n, double x) {
  require(n >= 1, ErrorKind::domain, "sine_kernel_n: n must be >= 1");
  // Reduce to the nearest multiple of n, where the ratio has a removable point.
  const double nn = n;
  const double m = std::round(x / nn);
  const double d = x - m * nn;
  const long mi = static_cast<long>(m);
  const double sign = ((mi * (n - 1)) % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(d) < 1e-6) {
    const double t = kPi * d;
    return sign * (1.0 - t * t * (1.0 - 1.0 / (nn * nn)) / 6.0);
  }
  return sign * std::sin(kPi * d) / (nn * std::sin(kPi * d / nn));
}

double sine_kernel_det(std::span<const double> points, Kernel kernel, int n) {
  require(!points.empty(), ErrorKind::domain, "sine_kernel_det: need at least one point");
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double d = points[i] - points[j];
      m(i, j) = kernel == Kernel::limit ? sine_kernel(d) : sine_kernel_n(n, d);
    }
  }
  return Eigen::FullPivLU<Eigen::MatrixXd>(m).determinant();
}

}  // namespace speclab::ratiodet
