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

#include "speclab/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "speclab/error.hpp"

namespace speclab::stats {

namespace {

constexpr long kChunk = 512;

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

bool real_valued(const testfn::TestFunction& fn) {
  return std::holds_alternative<testfn::Q>(fn) || std::holds_alternative<testfn::G>(fn) ||
         std::holds_alternative<testfn::Gk>(fn) || std::holds_alternative<testfn::Indicator>(fn);
}

void integer_partitions(int remaining, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    integer_partitions(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void delta_rec(std::span<const double> v, std::span<const int> powers, std::size_t depth, std::vector<char>& used,
               double prod, double& total) {
  if (depth == powers.size()) {
    total += prod;
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    delta_rec(v, powers, depth + 1, used, prod * std::pow(v[i], powers[depth]), total);
    used[i] = 0;
  }
}

}  // namespace

std::string model_name(TailModel m) {
  switch (m) {
    case TailModel::xlogx:
      return "xlogx";
    case TailModel::xsquared:
      return "xsquared";
    case TailModel::exponential:
      break;
  }
  return "exponential";
}

TailReport empirical_survival(std::span<const double> values, std::span<const double> grid) {
  require(!values.empty(), ErrorKind::domain, "empirical_survival: no values");
  require(std::is_sorted(grid.begin(), grid.end()), ErrorKind::domain, "empirical_survival: grid not ascending");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  TailReport r;
  r.samples = static_cast<long>(sorted.size());
  r.grid.assign(grid.begin(), grid.end());
  for (const double x : grid) {
    const long c = static_cast<long>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x));
    r.counts.push_back(c);
    r.survival.push_back(static_cast<double>(c) / static_cast<double>(r.samples));
  }
  return r;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  require(points >= 2 && hi > lo, ErrorKind::domain, "linear_grid: need points >= 2 and hi > lo");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

double model_predictor(TailModel m, double x) {
  switch (m) {
    case TailModel::xlogx:
      return x * std::log(x);
    case TailModel::xsquared:
      return x * x;
    case TailModel::exponential:
      break;
  }
  return x;
}

double model_survival(const ModelFit& fit, double x) {
  return std::exp(-(fit.C * model_predictor(fit.model, x) + fit.intercept));
}

TailReport fit_tail(TailReport r) {
  r.window.clear();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    if (r.survival[i] <= kWindowStart && r.counts[i] >= kMinTailCount && r.survival[i] < 0.5 && r.grid[i] > 0.0) {
      r.window.push_back(i);
    }
  }
  require(r.window.size() >= 5, ErrorKind::numeric,
          "fit_tail: insufficient tail mass (" + std::to_string(r.window.size()) +
              " grid points with survival <= 0.2 and count >= 20; need 5)");
  std::vector<double> y, lx, lly;
  for (const std::size_t i : r.window) {
    y.push_back(-std::log(r.survival[i]));
    lx.push_back(std::log(r.grid[i]));
    lly.push_back(std::log(-std::log(r.survival[i])));
  }
  const TailModel models[] = {TailModel::xlogx, TailModel::xsquared, TailModel::exponential};
  for (int m = 0; m < 3; ++m) {
    std::vector<double> x;
    for (const std::size_t i : r.window) x.push_back(model_predictor(models[m], r.grid[i]));
    const auto f = least_squares(x, y);
    r.fits[m] = {models[m], f.slope, f.intercept, f.r2};
  }
  r.best = *std::max_element(r.fits.begin(), r.fits.end(), [](const ModelFit& a, const ModelFit& b) { return a.r2 < b.r2; });
  const auto ll = least_squares(lx, lly);
  r.loglog_slope = ll.slope;
  r.loglog_r2 = ll.r2;
  r.fitted = true;
  return r;
}

MomentReport moment_ci(std::span<const double> values, int order) {
  require(!values.empty(), ErrorKind::domain, "moment_ci: no values");
  require(order >= 0, ErrorKind::domain, "moment_ci: order must be >= 0");
  MomentReport m;
  m.order = order;
  m.samples = static_cast<long>(values.size());
  if (order == 0) {
    m.estimate = 1.0;
    return m;
  }
  double s = 0, s2 = 0;
  for (const double v : values) {
    const double p = std::pow(v, order);
    s += p;
    s2 += p * p;
  }
  const double n = static_cast<double>(values.size());
  const double mean = s / n;
  m.estimate = mean;
  m.stderr_ = values.size() > 1 ? std::sqrt(std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) / n) : 0.0;
  return m;
}

MomentReport moment_ci(std::span<const cplx> values, int order) {
  std::vector<double> mod(values.size());
  std::transform(values.begin(), values.end(), mod.begin(), [](cplx v) { return std::abs(v); });
  return moment_ci(std::span<const double>(mod), order);
}

PartitionExpansion partition_expansion(int order) {
  require(order >= 1 && order <= 10, ErrorKind::domain, "partition_expansion: order must be in 1..10");
  std::vector<std::vector<int>> parts;
  std::vector<int> cur;
  integer_partitions(order, order, cur, parts);
  PartitionExpansion e;
  e.order = order;
  for (const auto& p : parts) {
    // Set partitions with these block sizes: l! / (prod b! * prod mult!).
    long long denom = 1;
    std::map<int, int> mult;
    for (const int b : p) {
      denom *= factorial(b);
      ++mult[b];
    }
    for (const auto& [b, c] : mult) denom *= factorial(c);
    e.terms.push_back({p, factorial(order) / denom});
  }
  // Fewest blocks first, matching Delta_1(eta^l) + ... + Delta_l(eta, ..., eta).
  std::stable_sort(e.terms.begin(), e.terms.end(),
                   [](const PartitionTerm& a, const PartitionTerm& b) { return a.blocks.size() < b.blocks.size(); });
  return e;
}

double correlation_delta(std::span<const double> eta_values, std::span<const int> powers) {
  require(!powers.empty(), ErrorKind::domain, "correlation_delta: no blocks");
  std::vector<char> used(eta_values.size(), 0);
  double total = 0.0;
  delta_rec(eta_values, powers, 0, used, 1.0, total);
  return total;
}

double evaluate_expansion(const PartitionExpansion& e, std::span<const double> eta_values) {
  double total = 0.0;
  for (const auto& t : e.terms) total += static_cast<double>(t.coefficient) * correlation_delta(eta_values, t.blocks);
  return total;
}

double exp_truncation_gap(std::span<const double> values, int k) {
  require(k >= 0, ErrorKind::domain, "exp_truncation_gap: k must be >= 0");
  if (values.empty()) return 0.0;
  double total = 0.0;
  for (const double x : values) {
    require(x >= 0.0, ErrorKind::domain, "exp_truncation_gap: values must be nonnegative");
    // Tail sum_{l > k} x^l / l! directly, avoiding cancellation.
    double term = 1.0;
    for (int l = 1; l <= k + 1; ++l) term *= x / l;
    const double first = term;
    double gap = 0.0;
    for (int l = k + 2; term > 0.0 && term > 1e-17 * gap; ++l) {
      gap += term;
      term *= x / l;
    }
    if (term > 0.0) gap += term;
    require(gap >= 0.0 && gap <= first * std::exp(x) * (1.0 + 1e-12), ErrorKind::numeric,
            "exp_truncation_gap: sandwich violated");
    total += gap;
  }
  return total / static_cast<double>(values.size());
}

double McResult::stderr_(int d) const {
  const double n = static_cast<double>(samples);
  if (samples < 2) return 0.0;
  const double m = sum[d] / n;
  return std::sqrt(std::max(0.0, (sum2[d] - n * m * m) / (n - 1.0)) / n);
}

std::vector<double> McResult::column(int d) const {
  require(!values.empty(), ErrorKind::domain, "McResult: values were not kept");
  std::vector<double> c(samples);
  for (long i = 0; i < samples; ++i) c[i] = values[static_cast<std::size_t>(i) * dims + d];
  return c;
}

McResult mc_run(const SampleFn& fn, int dims, long samples, int workers, bool keep_values) {
  require(samples >= 1, ErrorKind::domain, "mc_driver: samples must be >= 1");
  require(dims >= 1, ErrorKind::domain, "mc_driver: dims must be >= 1");
  require(workers >= 1, ErrorKind::domain, "mc_driver: workers must be >= 1");
  const long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> part_sum(static_cast<std::size_t>(chunks) * dims, 0.0);
  std::vector<double> part_sum2(part_sum.size(), 0.0);
  McResult r;
  r.samples = samples;
  r.dims = dims;
  if (keep_values) r.values.assign(static_cast<std::size_t>(samples) * dims, 0.0);
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&]() {
    std::vector<double> buf(dims);
    for (long c = next++; c < chunks && !failed; c = next++) {
      try {
        const long lo = c * kChunk, hi = std::min(samples, lo + kChunk);
        for (long i = lo; i < hi; ++i) {
          std::fill(buf.begin(), buf.end(), 0.0);
          fn(static_cast<std::uint64_t>(i), buf);
          for (int d = 0; d < dims; ++d) {
            part_sum[c * dims + d] += buf[d];
            part_sum2[c * dims + d] += buf[d] * buf[d];
            if (keep_values) r.values[static_cast<std::size_t>(i) * dims + d] = buf[d];
          }
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::min<long>(workers, chunks));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  r.sum.assign(dims, 0.0);
  r.sum2.assign(dims, 0.0);
  for (long c = 0; c < chunks; ++c) {
    for (int d = 0; d < dims; ++d) {
      r.sum[d] += part_sum[c * dims + d];
      r.sum2[d] += part_sum2[c * dims + d];
    }
  }
  return r;
}

McReport mc_driver(const Experiment& ex, long samples, std::uint64_t seed, int workers) {
  McReport rep;
  rep.kind = ex.kind;
  rep.samples = samples;
  rep.seed = seed;
  rep.workers = workers;
  require(ex.n >= 1, ErrorKind::domain, "mc_driver: n must be >= 1");
  const auto draw = [&](std::uint64_t i) { return cue::sample_eigenangles(ex.n, seed, i, ex.sampler); };
  // Q, J and I_alpha come straight from the characteristic polynomial when
  // the sampler already produces Verblunsky coefficients.
  const bool resolvent = ex.sampler == cue::Sampler::verblunsky &&
                         (std::holds_alternative<testfn::Q>(ex.fn) || std::holds_alternative<testfn::J>(ex.fn) ||
                          std::holds_alternative<testfn::Ialpha>(ex.fn));
  const auto statistic = [&](std::uint64_t i) {
    if (resolvent) return cue::linstat_resolvent(cue::sample_verblunsky(ex.n, seed, i), ex.fn).value(ex.mode);
    return cue::linstat(draw(i), ex.fn, ex.mode);
  };

  if (ex.kind == "tail" || ex.kind == "moment") {
    const bool real = real_valued(ex.fn) && ex.mode != LinStatMode::centered;
    const auto r = mc_run(
        [&](std::uint64_t i, std::span<double> out) {
          const cplx v = statistic(i);
          out[0] = real ? v.real() : std::abs(v);
        },
        1, samples, workers, true);
    const auto vals = r.column(0);
    if (ex.kind == "tail") {
      std::vector<double> grid = ex.grid;
      if (grid.empty()) {
        const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
        grid = linear_grid(*mn, *mx > *mn ? *mx : *mn + 1.0, 40);
      }
      rep.tail = empirical_survival(vals, grid);
      try {
        rep.tail = fit_tail(rep.tail);
      } catch (const Error&) {
        // Too little tail mass to fit; the survival curve is still reported.
      }
    } else {
      for (int l = 1; l <= ex.max_order; ++l) rep.moments.push_back(moment_ci(vals, l));
    }
  } else if (ex.kind == "ratio") {
    ratiodet::validate(ex.ratio);
    const auto r = mc_run(
        [&](std::uint64_t i, std::span<double> out) {
          const cplx v = cue::char_ratio(draw(i), ex.ratio.alphas, ex.ratio.betas);
          out[0] = v.real();
          out[1] = v.imag();
        },
        2, samples, workers, false);
    rep.ratio_mean = {r.mean(0), r.mean(1)};
    rep.ratio_stderr_re = r.stderr_(0);
    rep.ratio_stderr_im = r.stderr_(1);
    rep.ratio_exact = ratiodet::finite_ratio_expectation(ex.ratio, ex.n);
  } else if (ex.kind == "correlation") {
    require(static_cast<bool>(ex.eta), ErrorKind::domain, "mc_driver: correlation experiment needs eta");
    const auto r = mc_run(
        [&](std::uint64_t i, std::span<double> out) { out[0] = cue::correlation_statistic(draw(i), ex.k, ex.eta, ex.halfwidth); },
        1, samples, workers, false);
    rep.correlation_mean = r.mean(0);
    rep.correlation_stderr = r.stderr_(0);
  } else {
    fail(ErrorKind::domain, "mc_driver: unknown experiment '" + ex.kind + "'");
  }
  return rep;
}

}  // namespace speclab::stats
