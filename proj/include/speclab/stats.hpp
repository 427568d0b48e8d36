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

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "speclab/cue.hpp"
#include "speclab/linstat.hpp"
#include "speclab/ratiodet.hpp"
#include "speclab/testfn.hpp"

namespace speclab::stats {

using cplx = std::complex<double>;

enum class TailModel { xlogx, xsquared, exponential };
std::string model_name(TailModel m);

/// Least-squares fit of -log S = C * phi(x) + intercept.
struct ModelFit {
  TailModel model = TailModel::xlogx;
  double C = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct TailReport {
  std::vector<double> grid;
  std::vector<double> survival;  // fraction of values >= grid[i]
  std::vector<long> counts;      // number of values >= grid[i]
  long samples = 0;

  bool fitted = false;
  std::array<ModelFit, 3> fits{};  // xlogx, xsquared, exponential
  ModelFit best;
  std::vector<std::size_t> window;  // grid indices used by the fit
  double loglog_slope = 0.0;        // slope of log(-log S) against log x on the window
  double loglog_r2 = 0.0;
};

inline constexpr long kMinTailCount = 20;
inline constexpr double kWindowStart = 0.2;

TailReport empirical_survival(std::span<const double> values, std::span<const double> grid);

/// Uniform grid of `points` values on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int points);

/// Fits the three tail models on grid points with survival <= 0.2 and count
/// >= 20. Throws ErrorKind::numeric with fewer than 5 such points.
TailReport fit_tail(TailReport report);

double model_predictor(TailModel m, double x);
/// exp(-(C phi(x) + intercept)) under a fit.
double model_survival(const ModelFit& fit, double x);

struct MomentReport {
  int order = 0;
  cplx estimate;
  double stderr_ = 0.0;
  long samples = 0;
};

/// Mean of v^order (real) or |v|^order (complex) with its standard error.
MomentReport moment_ci(std::span<const double> values, int order);
MomentReport moment_ci(std::span<const cplx> values, int order);

struct PartitionTerm {
  std::vector<int> blocks;  // block sizes, non-increasing
  long long coefficient = 0;
};

struct PartitionExpansion {
  int order = 0;
  std::vector<PartitionTerm> terms;
};

/// (sum_i eta(x_i))^l as a sum over set partitions of {1..l} of
/// Delta_j(eta^{b_1}, ..., eta^{b_j}), grouped by block sizes. 1 <= l <= 10.
PartitionExpansion partition_expansion(int order);

/// Delta_j(eta^{b_1}, ..., eta^{b_j}): sum over ordered tuples of distinct
/// points of prod_r eta(x_{i_r})^{b_r}.
double correlation_delta(std::span<const double> eta_values, std::span<const int> powers);

/// Evaluates an expansion on the values eta(x_i).
double evaluate_expansion(const PartitionExpansion& e, std::span<const double> eta_values);

/// Mean of e^x - sum_{l <= k} x^l / l! over nonnegative x, checking
/// 0 <= gap <= x^{k+1} e^x / (k+1)! for every value.
double exp_truncation_gap(std::span<const double> values, int k);

/// Fills `out` with the observables of sample `index`.
using SampleFn = std::function<void(std::uint64_t index, std::span<double> out)>;

struct McResult {
  long samples = 0;
  int dims = 0;
  std::vector<double> sum;
  std::vector<double> sum2;
  std::vector<double> values;  // row-major samples x dims when kept

  double mean(int d) const { return sum[d] / static_cast<double>(samples); }
  double stderr_(int d) const;
  std::vector<double> column(int d) const;
};

/// Runs fn over indices [0, samples) in fixed chunks on `workers` threads and
/// merges chunk partials in index order, so results do not depend on workers.
McResult mc_run(const SampleFn& fn, int dims, long samples, int workers, bool keep_values);

struct Experiment {
  std::string kind;  // tail, moment, ratio, correlation
  int n = 10;
  cue::Sampler sampler = cue::Sampler::dense;
  testfn::TestFunction fn = testfn::Q{};
  LinStatMode mode = LinStatMode::raw;
  int max_order = 4;         // moment
  std::vector<double> grid;  // tail; empty picks 40 points over the sample range
  ratiodet::RatioSpec ratio;
  int k = 2;  // correlation
  cue::CorrelationEta eta;
  double halfwidth = 1.0;
};

struct McReport {
  std::string kind;
  long samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  TailReport tail;
  std::vector<MomentReport> moments;
  cplx ratio_mean;
  double ratio_stderr_re = 0.0;
  double ratio_stderr_im = 0.0;
  cplx ratio_exact;
  double correlation_mean = 0.0;
  double correlation_stderr = 0.0;
};

/// Tail and moment experiments use the real part of the statistic when
/// fn is real valued on the line, its modulus otherwise.
McReport mc_driver(const Experiment& experiment, long samples, std::uint64_t seed, int workers);

}  // namespace speclab::stats
