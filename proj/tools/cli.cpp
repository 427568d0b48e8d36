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

#include "cli.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"
#include "speclab/cue.hpp"
#include "speclab/error.hpp"
#include "speclab/ratiodet.hpp"
#include "speclab/rng.hpp"
#include "speclab/stats.hpp"
#include "speclab/zeta.hpp"

namespace speclab::cli {

using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kDataEnv = "SPECTRAL_LAB_DATA";
constexpr const char* kDefaultTable = "zeros.txt";

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  const auto [p, ec] = std::from_chars(b, e, v);
  require(b != e && ec == std::errc{} && p == e, ErrorKind::validation, "bad " + what + " '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(!s.empty() && ec == std::errc{} && p == s.data() + s.size(), ErrorKind::validation,
          "bad " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string show(cplx z) {
  if (z.imag() == 0.0) return format_short(z.real());
  return format_short(z.real()) + (z.imag() < 0 ? "-" : "+") + format_short(std::abs(z.imag())) + "i";
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

LinStatMode parse_mode(const std::string& s) {
  if (s == "raw") return LinStatMode::raw;
  if (s == "reference") return LinStatMode::reference;
  return LinStatMode::centered;
}

cue::Sampler parse_sampler(const std::string& s) {
  return s == "dense" ? cue::Sampler::dense : cue::Sampler::verblunsky;
}

std::vector<cplx> parse_complex_list(const std::vector<std::string>& v) {
  std::vector<cplx> out;
  for (const auto& s : v) out.push_back(parse_complex(s));
  return out;
}

// Real-valued statistics keep their sign; everything else is reduced to a modulus.
bool real_valued(const testfn::TestFunction& fn, LinStatMode mode) {
  const bool real_kind = std::holds_alternative<testfn::Q>(fn) || std::holds_alternative<testfn::G>(fn) ||
                         std::holds_alternative<testfn::Gk>(fn) || std::holds_alternative<testfn::Indicator>(fn);
  return real_kind && mode != LinStatMode::centered;
}

double reduce(cplx v, bool real) { return real ? v.real() : std::abs(v); }

json fit_json(const stats::ModelFit& f) {
  return {{"model", stats::model_name(f.model)}, {"C", f.C}, {"intercept", f.intercept}, {"r2", f.r2}};
}

// Adds survival and count rows plus the fitted constants under `name`.
void tail_rows(Report& r, const std::string& name, const stats::TailReport& t) {
  bool monotone = true;
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    const double s = t.survival[i];
    const std::string x = format_double(t.grid[i]);
    r.add(name + "/survival", x, s, std::sqrt(s * (1.0 - s) / static_cast<double>(t.samples)));
    r.add(name + "/count", x, static_cast<double>(t.counts[i]));
    if (i > 0 && s > t.survival[i - 1]) monotone = false;
  }
  json c = {{"samples", t.samples}, {"fitted", t.fitted}};
  if (t.fitted) {
    c["fits"] = json::array();
    for (const auto& f : t.fits) c["fits"].push_back(fit_json(f));
    c["best"] = stats::model_name(t.best.model);
    c["window"] = json::array({t.grid[t.window.front()], t.grid[t.window.back()]});
    c["loglog_slope"] = t.loglog_slope;
    c["loglog_r2"] = t.loglog_r2;
    r.lines.push_back(name + ": best model " + stats::model_name(t.best.model) + ", C = " + format_short(t.best.C) +
                      ", log-log slope " + format_short(t.loglog_slope));
  } else {
    r.lines.push_back(name + ": too few tail points for a fit");
  }
  r.constants[name] = c;
  r.check("survival non-increasing", monotone);
}

stats::TailReport fitted_or_raw(stats::TailReport t) {
  try {
    return stats::fit_tail(t);
  } catch (const Error&) {
    return t;
  }
}

std::vector<double> auto_grid(const std::vector<double>& v, int points) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double a = *lo, b = *hi > *lo ? *hi : *lo + 1.0;
  return stats::linear_grid(a, b, points);
}

// ---- zero tables ----

struct TableOpts {
  std::string path;
  std::string format = "plain";
  double locate_to = 0.0;
};

void add_table_options(CLI::App* app, TableOpts& t) {
  app->add_option("--table", t.path, "zero table path (default $SPECTRAL_LAB_DATA/zeros.txt, else the locator)");
  app->add_option("--table-format", t.format, "zero table format")->check(CLI::IsMember({"plain", "offset"}));
  app->add_option("--locate-to", t.locate_to,
                  "height up to which the locator builds the table when no file is given (t units; 0 = as needed)");
}

zeta::ZeroTable resolve_table(const TableOpts& t, double needed, Report& r) {
  const auto fmt = t.format == "offset" ? zeta::TableFormat::offset_block : zeta::TableFormat::plain;
  std::string path = t.path;
  if (path.empty()) {
    if (const char* dir = std::getenv(kDataEnv); dir && *dir) {
      const auto p = std::filesystem::path(dir) / kDefaultTable;
      if (std::filesystem::exists(p)) path = p.string();
    }
  }
  zeta::ZeroTable table;
  if (!path.empty()) {
    table = zeta::read_zero_table(path, fmt);
    r.constants["table_source"] = path;
  } else {
    const double top = std::max(t.locate_to, needed);
    require(top > 0.0 && top <= zeta::kMaxHeight, ErrorKind::validation,
            "--locate-to must lie in (0, " + format_short(zeta::kMaxHeight) + "]");
    table = zeta::make_table(zeta::locate_zeros(0.0, top), 1e-9);
    r.constants["table_source"] = "locator [0, " + format_short(top) + "]";
  }
  r.constants["table_count"] = table.ordinates.size();
  r.constants["table_height_max"] = table.height_max;
  return table;
}

// ---- subcommand parameters ----

struct Common {
  std::uint64_t seed = 1;
  int workers = 1;
};

void add_mc_options(CLI::App* app, Common& c, long& samples) {
  app->add_option("--samples", samples, "Monte Carlo sample count (count)")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "64-bit stream seed");
  app->add_option("--workers", c.workers, "worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);
}

struct CueTail {
  int n = 50;
  long samples = 100000;
  std::string fn = "Q";
  std::string mode = "raw";
  std::string sampler = "verblunsky";
  std::string grid;
  Common c;
};

Report cue_tail(const CueTail& p) {
  Report r;
  stats::Experiment ex;
  ex.kind = "tail";
  ex.n = p.n;
  ex.sampler = parse_sampler(p.sampler);
  ex.fn = parse_function(p.fn);
  ex.mode = parse_mode(p.mode);
  if (!p.grid.empty()) ex.grid = parse_grid(p.grid);
  const auto rep = stats::mc_driver(ex, p.samples, p.c.seed, p.c.workers);
  tail_rows(r, "cue-tail", rep.tail);
  return r;
}

struct CueMoments {
  int n = 10;
  long samples = 10000;
  std::string fn = "Gk:4";
  std::string mode = "centered";
  std::string sampler = "dense";
  int max_order = 8;
  Common c;
};

Report cue_moments(const CueMoments& p) {
  Report r;
  stats::Experiment ex;
  ex.kind = "moment";
  ex.n = p.n;
  ex.sampler = parse_sampler(p.sampler);
  ex.fn = parse_function(p.fn);
  ex.mode = parse_mode(p.mode);
  ex.max_order = p.max_order;
  const auto rep = stats::mc_driver(ex, p.samples, p.c.seed, p.c.workers);
  json ms = json::array();
  double growth = 0.0;
  for (const auto& m : rep.moments) {
    r.add("cue-moments", "order=" + std::to_string(m.order), m.estimate.real(), m.stderr_);
    ms.push_back({{"order", m.order}, {"estimate", m.estimate.real()}, {"stderr", m.stderr_}, {"samples", m.samples}});
    if (m.order % 2 == 0) {
      const int l = m.order / 2;
      growth = std::max(growth, std::pow(std::abs(m.estimate.real()), 1.0 / l) / l);
    }
    r.lines.push_back("order " + std::to_string(m.order) + ": " + format_short(m.estimate.real()) + " +- " +
                      format_short(m.stderr_));
  }
  r.constants["moments"] = ms;
  // max over even orders 2l of (E|X|^{2l})^{1/l} / l
  r.constants["growth_constant"] = growth;
  return r;
}

struct DsCheck {
  int n = 10;
  int jmax = 5;
  long samples = 100000;
  std::string sampler = "dense";
  Common c;
};

Report ds_check(const DsCheck& p) {
  Report r;
  require(p.jmax >= 2, ErrorKind::validation, "--jmax must be >= 2");
  const auto sampler = parse_sampler(p.sampler);
  const int dims = p.jmax + 2;
  const auto res = stats::mc_run(
      [&](std::uint64_t i, std::span<double> out) {
        const auto tv = cue::traces(cue::sample_eigenangles(p.n, p.c.seed, i, sampler), p.jmax);
        for (int j = 1; j <= p.jmax; ++j) out[j - 1] = std::norm(tv.at(j));
        // a = (2), b = (0, 1): Tr(g)^2 conj(Tr(g^2)), expectation 0
        const cplx mixed = tv.at(1) * tv.at(1) * std::conj(tv.at(2));
        out[p.jmax] = mixed.real();
        out[p.jmax + 1] = mixed.imag();
      },
      dims, p.samples, p.c.workers, false);
  // Exact values need n >= sum j a_j; below that the moments are smaller.
  for (int j = 1; j <= p.jmax; ++j) {
    const double est = res.mean(j - 1), se = res.stderr_(j - 1);
    const double expect = std::min(j, p.n);
    const bool ok = std::abs(est - expect) <= 3.0 * se;
    r.add("ds-check", "E|Tr g^" + std::to_string(j) + "|^2", est, se);
    r.check("j=" + std::to_string(j), ok, {{"estimate", est}, {"stderr", se}, {"expected", expect}});
    r.lines.push_back("E|Tr g^" + std::to_string(j) + "|^2 = " + format_short(est) + " +- " + format_short(se) +
                      " (expected " + format_short(expect) + ")");
  }
  const double re = res.mean(p.jmax), im = res.mean(p.jmax + 1);
  const double sre = res.stderr_(p.jmax), sim = res.stderr_(p.jmax + 1);
  r.add("ds-check", "mixed re", re, sre);
  r.add("ds-check", "mixed im", im, sim);
  const double expect_mixed = p.n >= 2 ? 0.0 : 1.0;
  const bool ok = std::abs(re - expect_mixed) <= 3.0 * sre && std::abs(im) <= 3.0 * sim;
  r.check("mixed a=(2) b=(0,1)", ok, {{"estimate", json::array({re, im})}, {"stderr", json::array({sre, sim})}});
  r.lines.push_back("E[Tr(g)^2 conj Tr(g^2)] = " + show({re, im}));
  return r;
}

struct RatioArgs {
  std::vector<std::string> alphas;
  std::vector<std::string> betas;
  int n = 8;
  long samples = 100000;
  std::string sampler = "dense";
  Common c;
};

ratiodet::RatioSpec ratio_spec(const RatioArgs& p) {
  ratiodet::RatioSpec s{parse_complex_list(p.alphas), parse_complex_list(p.betas)};
  ratiodet::validate(s);
  return s;
}

void ratio_value(Report& r, const std::string& name, cplx v) {
  r.add(name, "re", v.real());
  r.add(name, "im", v.imag());
  r.constants["value"] = cjson(v);
  r.lines.push_back(show(v));
}

Report ratio_finite(const RatioArgs& p) {
  Report r;
  ratio_value(r, "ratio-finite", ratiodet::finite_ratio_expectation(ratio_spec(p), p.n));
  return r;
}

Report ratio_limit(const RatioArgs& p) {
  Report r;
  ratio_value(r, "ratio-limit", ratiodet::limit_ratio_expectation(ratio_spec(p)));
  return r;
}

Report ratio_mc(const RatioArgs& p) {
  Report r;
  stats::Experiment ex;
  ex.kind = "ratio";
  ex.n = p.n;
  ex.sampler = parse_sampler(p.sampler);
  ex.ratio = ratio_spec(p);
  const auto rep = stats::mc_driver(ex, p.samples, p.c.seed, p.c.workers);
  r.add("ratio-mc", "mean re", rep.ratio_mean.real(), rep.ratio_stderr_re);
  r.add("ratio-mc", "mean im", rep.ratio_mean.imag(), rep.ratio_stderr_im);
  r.add("ratio-mc", "exact re", rep.ratio_exact.real());
  r.add("ratio-mc", "exact im", rep.ratio_exact.imag());
  r.constants["mean"] = cjson(rep.ratio_mean);
  r.constants["stderr"] = json::array({rep.ratio_stderr_re, rep.ratio_stderr_im});
  r.constants["exact"] = cjson(rep.ratio_exact);
  const bool ok = std::abs(rep.ratio_mean.real() - rep.ratio_exact.real()) <= 3.0 * rep.ratio_stderr_re &&
                  std::abs(rep.ratio_mean.imag() - rep.ratio_exact.imag()) <= 3.0 * rep.ratio_stderr_im;
  r.check("determinant inside 3-stderr band", ok);
  r.lines.push_back("Monte Carlo " + show(rep.ratio_mean) + ", determinant " + show(rep.ratio_exact));
  return r;
}

struct SineCorr {
  std::vector<double> points;
  std::string kernel = "limit";
  int n = 0;
  std::string grid = "0:3:31";
};

Report sine_corr(const SineCorr& p) {
  Report r;
  const auto kernel = p.kernel == "finite" ? ratiodet::Kernel::finite : ratiodet::Kernel::limit;
  require(kernel == ratiodet::Kernel::limit || p.n > 0, ErrorKind::validation, "--kernel finite needs --n");
  if (!p.points.empty()) {
    const double d = ratiodet::sine_kernel_det(p.points, kernel, p.n);
    r.add("sine-corr", "det", d);
    r.constants["det"] = d;
    r.lines.push_back(format_short(d));
    return r;
  }
  // Pair correlation 1 - K(x)^2 along a grid.
  for (const double x : parse_grid(p.grid)) {
    const std::array<double, 2> pts{0.0, x};
    r.add("sine-corr/R2", format_double(x), ratiodet::sine_kernel_det(pts, kernel, p.n));
  }
  r.lines.push_back(std::to_string(r.rows.size()) + " grid points");
  return r;
}

struct LogderivId {
  int n = 32;
  long samples = 1000;
  std::vector<std::string> alphas{"0.5", "1", "2"};
  std::string sampler = "dense";
  Common c;
};

Report logderiv_id(const LogderivId& p) {
  Report r;
  const auto alphas = parse_complex_list(p.alphas);
  for (const cplx a : alphas) require(a.real() > 0.0, ErrorKind::validation, "alpha " + show(a) + " needs Re > 0");
  const auto sampler = parse_sampler(p.sampler);
  const int dims = static_cast<int>(alphas.size());
  const auto res = stats::mc_run(
      [&](std::uint64_t i, std::span<double> out) {
        const auto s = cue::sample_eigenangles(p.n, p.c.seed, i, sampler);
        for (int d = 0; d < dims; ++d) {
          const cplx direct = cue::char_logderiv(s, alphas[d]);
          const cplx via = cue::linstat(s, testfn::Ialpha{alphas[d]}, LinStatMode::centered);
          out[d] = std::abs(direct - via);
        }
      },
      dims, p.samples, p.c.workers, true);
  double worst = 0.0;
  for (int d = 0; d < dims; ++d) {
    const auto col = res.column(d);
    const double m = *std::max_element(col.begin(), col.end());
    worst = std::max(worst, m);
    r.add("logderiv-id/max-abs-diff", show(alphas[d]), m);
  }
  r.constants["max_abs_diff"] = worst;
  r.check("direct sum equals <I_alpha, E~> to 1e-10", worst <= 1e-10, {{"max_abs_diff", worst}});
  r.lines.push_back("max |direct - linstat| = " + format_short(worst));
  return r;
}

struct ZetaIngest {
  std::string in;
  std::string format = "plain";
};

Report zeta_ingest(const ZetaIngest& p) {
  Report r;
  const auto t = zeta::read_zero_table(
      p.in, p.format == "offset" ? zeta::TableFormat::offset_block : zeta::TableFormat::plain);
  r.add("zeta-ingest", "count", static_cast<double>(t.ordinates.size()));
  r.add("zeta-ingest", "height_min", t.height_min);
  r.add("zeta-ingest", "height_max", t.height_max);
  r.constants["count"] = t.ordinates.size();
  r.constants["height_min"] = t.height_min;
  r.constants["height_max"] = t.height_max;
  r.constants["stated_precision"] = t.stated_precision;
  r.lines.push_back("count " + std::to_string(t.ordinates.size()));
  return r;
}

struct ZetaLocate {
  double from = 0.0;
  double to = 100.0;
  double tol = 1e-9;
  std::string reference;
  std::string reference_format = "plain";
  int compare = 20;
};

Report zeta_locate(const ZetaLocate& p) {
  Report r;
  const auto rep = zeta::locate_zeros_report(p.from, p.to, p.tol);
  for (std::size_t i = 0; i < rep.zeros.size(); ++i) r.add("zeta-locate", std::to_string(i + 1), rep.zeros[i], p.tol);
  const double count = static_cast<double>(rep.zeros.size());
  r.constants["count"] = rep.zeros.size();
  r.constants["smooth_estimate"] = rep.estimate;
  r.constants["grid_step"] = rep.step;
  r.check("count within 2 of the smooth estimate", std::abs(count - rep.estimate) <= 2.0,
          {{"count", count}, {"estimate", rep.estimate}});
  r.lines.push_back("located " + std::to_string(rep.zeros.size()) + " zeros in [" + format_short(p.from) + ", " +
                    format_short(p.to) + "], smooth estimate " + format_short(rep.estimate));
  if (!p.reference.empty()) {
    const auto ref = zeta::read_zero_table(
        p.reference, p.reference_format == "offset" ? zeta::TableFormat::offset_block : zeta::TableFormat::plain);
    const std::size_t m = std::min<std::size_t>(
        {static_cast<std::size_t>(std::max(p.compare, 0)), ref.ordinates.size(), rep.zeros.size()});
    require(m > 0, ErrorKind::validation, "nothing to compare against " + p.reference);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(ref.ordinates[i] - rep.zeros[i]));
    r.constants["reference_max_diff"] = worst;
    r.check("first " + std::to_string(m) + " zeros match the reference to 1e-6", worst <= 1e-6,
            {{"max_diff", worst}});
  }
  return r;
}

struct ExplicitFormula {
  std::vector<std::string> splines;
  TableOpts table;
};

std::vector<zeta::ExplicitTestFn> default_family() {
  return {zeta::bspline(6, 0.5, 0.0), zeta::bspline(6, 0.5, 1.2), zeta::bspline(8, 0.4, -1.5),
          zeta::bspline(5, 0.7, 2.0),
          zeta::combine({zeta::bspline(6, 0.5, 0.7), zeta::bspline(7, 0.3, -2.5, -0.5)})};
}

// "m,h,c[,w]" terms joined by '+'.
zeta::ExplicitTestFn parse_spline(const std::string& s) {
  std::vector<zeta::ExplicitTestFn> parts;
  for (const auto& term : split(s, '+')) {
    const auto f = split(term, ',');
    require(f.size() == 3 || f.size() == 4, ErrorKind::validation, "bad spline '" + term + "', expected m,h,c[,w]");
    parts.push_back(zeta::bspline(to_int(f[0], "spline order"), to_double(f[1], "spline step"),
                                  to_double(f[2], "spline centre"), f.size() == 4 ? to_double(f[3], "weight") : 1.0));
  }
  return parts.size() == 1 ? parts.front() : zeta::combine(parts);
}

Report explicit_formula(const ExplicitFormula& p) {
  Report r;
  const auto family = [&] {
    if (p.splines.empty()) return default_family();
    std::vector<zeta::ExplicitTestFn> v;
    for (const auto& s : p.splines) v.push_back(parse_spline(s));
    return v;
  }();
  const auto table = resolve_table(p.table, 1000.0, r);
  json fns = json::array();
  for (const auto& g : family) {
    const auto s = zeta::explicit_formula_sides(g, table);
    r.add("explicit-formula/zero-side", g.name, s.zero_side);
    r.add("explicit-formula/prime-side", g.name, s.prime_side);
    r.add("explicit-formula/residual", g.name, s.residual, s.truncation_bound);
    fns.push_back({{"name", g.name}, {"support", g.support}, {"zero_side", s.zero_side},
                   {"prime_side", s.prime_side}, {"residual", s.residual},
                   {"truncation_bound", s.truncation_bound}, {"cutoff", s.cutoff}, {"zeros_used", s.zeros_used}});
    r.check(g.name + ": |residual| <= bound", std::abs(s.residual) <= s.truncation_bound,
            {{"residual", s.residual}, {"bound", s.truncation_bound}});
    r.lines.push_back(g.name + ": zero side " + format_short(s.zero_side) + ", prime side " +
                      format_short(s.prime_side) + ", residual " + format_short(s.residual) + " (bound " +
                      format_short(s.truncation_bound) + ")");
  }
  r.constants["functions"] = fns;
  return r;
}

struct ZetaSampling {
  double T = 900.0;
  long samples = 1000;
  double halfwidth = 0.0;
  TableOpts table;
  Common c;
};

void add_sampling_options(CLI::App* app, ZetaSampling& z) {
  app->add_option("--T", z.T, "window base height; t is sampled in [T, 2T] (t units)")->check(CLI::PositiveNumber);
  app->add_option("--samples", z.samples, "number of sampled heights (count)")->check(CLI::PositiveNumber);
  app->add_option("--halfwidth", z.halfwidth, "zero window halfwidth around t (t units; 0 = full table)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--seed", z.c.seed, "64-bit stream seed");
  app->add_option("--workers", z.c.workers, "worker threads (results do not depend on this)")
      ->check(CLI::PositiveNumber);
  add_table_options(app, z.table);
}

double sample_height(const zeta::SamplingWindow& w, std::uint64_t seed, std::uint64_t i, double top) {
  CounterRng rng(seed, i);
  return w.t_low + rng.uniform() * (top - w.t_low);
}

struct ZetaTail {
  ZetaSampling z;
  std::string fn = "Q";
  std::string mode = "raw";
  std::string grid;
};

Report zeta_tail(const ZetaTail& p) {
  Report r;
  const auto fn = parse_function(p.fn);
  const auto mode = parse_mode(p.mode);
  const auto w = zeta::make_window(p.z.T);
  const auto table = resolve_table(p.z.table, 2.0 * p.z.T + std::max(p.z.halfwidth, 50.0), r);
  const bool real = real_valued(fn, mode);
  const auto res = stats::mc_run(
      [&](std::uint64_t i, std::span<double> out) {
        const double t = sample_height(w, p.z.c.seed, i, w.t_high);
        out[0] = reduce(zeta::zero_linstat(table, w, t, fn, p.z.halfwidth).value(mode), real);
      },
      1, p.z.samples, p.z.c.workers, true);
  const auto vals = res.column(0);
  const auto grid = p.grid.empty() ? auto_grid(vals, 40) : parse_grid(p.grid);
  tail_rows(r, "zeta-tail", fitted_or_raw(stats::empirical_survival(vals, grid)));
  r.constants["mean"] = res.mean(0);
  return r;
}

struct ZetaCountTail {
  double T = 0.0;
  long samples = 10000;
  TableOpts table;
  Common c;
};

Report zeta_count_tail(const ZetaCountTail& p) {
  Report r;
  const auto table = resolve_table(p.table, p.T > 0.0 ? 2.0 * p.T + 1.0 : 2100.0, r);
  // Default: the top dyadic window [T, 2T] of the table.
  const double T = p.T > 0.0 ? p.T : 0.5 * table.height_max;
  const auto w = zeta::make_window(T);
  const double len = 1.0 / std::log(T);
  const double top = std::min(w.t_high, table.height_max - len);
  require(top > w.t_low && T >= table.covered_from(), ErrorKind::validation,
          "zero table does not cover the window [" + format_short(T) + ", " + format_short(2.0 * T) + "]");
  const auto res = stats::mc_run(
      [&](std::uint64_t i, std::span<double> out) {
        const double t = sample_height(w, p.c.seed, i, top);
        out[0] = static_cast<double>(table.count_in(t, t + len));
      },
      1, p.samples, p.c.workers, true);
  const auto vals = res.column(0);
  const int cmax = static_cast<int>(*std::max_element(vals.begin(), vals.end()));
  const auto t = fitted_or_raw(stats::empirical_survival(vals, stats::linear_grid(0.0, cmax + 1.0, cmax + 2)));
  tail_rows(r, "zeta-count-tail", t);
  r.constants["T"] = T;
  r.constants["interval"] = len;
  r.constants["mean_count"] = res.mean(0);
  // Reported shape checks; only monotonicity is hard.
  json shape;
  if (t.fitted && t.window.size() >= 3) {
    bool convex = true;
    for (std::size_t k = 1; k + 1 < t.window.size(); ++k) {
      const double a = std::log(t.survival[t.window[k - 1]]), b = std::log(t.survival[t.window[k]]),
                   c = std::log(t.survival[t.window[k + 1]]);
      if (a - 2.0 * b + c < -1e-12) convex = false;
    }
    shape["log_convex"] = convex;
  } else {
    shape["log_convex"] = nullptr;
  }
  if (t.fitted) {
    shape["xlogx_r2_exceeds_exponential"] = t.fits[0].r2 > t.fits[2].r2;
  } else {
    shape["xlogx_r2_exceeds_exponential"] = nullptr;
  }
  shape["window_points"] = t.window.size();
  r.constants["shape"] = shape;
  return r;
}

struct ZetaRatio {
  double T = 900.0;
  double t_from = 900.0;
  double t_to = 1100.0;
  int points = 50;
  std::string alpha = "2";
  std::string beta = "1";
  double halfwidth = 0.0;
  TableOpts table;
};

Report zeta_ratio(const ZetaRatio& p) {
  Report r;
  const cplx a = parse_complex(p.alpha), b = parse_complex(p.beta);
  const auto w = zeta::make_window(p.T);
  require(p.points >= 1 && p.t_from <= p.t_to, ErrorKind::validation, "need --points >= 1 and --t-from <= --t-to");
  const auto table = resolve_table(p.table, 2.0 * p.T + 100.0, r);
  const double lt = std::log(p.T);
  double worst = 0.0;
  std::string route;
  for (int i = 0; i < p.points; ++i) {
    const double t = p.points == 1 ? p.t_from : p.t_from + (p.t_to - p.t_from) * i / (p.points - 1);
    const auto est = zeta::zeta_ratio_from_zeros(table, w, t, a, b, p.halfwidth);
    route = est.route;
    const cplx em = zeta::zeta_em(cplx{0.5 + a.real() / lt, t + a.imag() / lt}).value /
                    zeta::zeta_em(cplx{0.5 + b.real() / lt, t + b.imag() / lt}).value;
    const double rel = std::abs(est.value / em - 1.0);
    worst = std::max(worst, rel);
    r.add("zeta-ratio/relative-error", format_double(t), rel, est.truncation_bound / std::abs(em));
    r.add("zeta-ratio/from-zeros-re", format_double(t), est.value.real());
    r.add("zeta-ratio/from-zeros-im", format_double(t), est.value.imag());
  }
  r.constants["route"] = route;
  r.constants["max_relative_error"] = worst;
  if (route == "exact") {
    r.check("reconstructed ratio matches zeta_em to 1e-3", worst <= 1e-3, {{"max_relative_error", worst}});
  }
  r.lines.push_back("route " + route + ", max relative error " + format_short(worst));
  return r;
}

struct ZetaLogderivTail {
  ZetaSampling z;
  std::string alpha = "1";
  std::string grid;
};

Report zeta_logderiv_tail(const ZetaLogderivTail& p) {
  Report r;
  const cplx a = parse_complex(p.alpha);
  const auto w = zeta::make_window(p.z.T);
  const auto table = resolve_table(p.z.table, 2.0 * p.z.T + std::max(p.z.halfwidth, 50.0), r);
  const auto res = stats::mc_run(
      [&](std::uint64_t i, std::span<double> out) {
        const double t = sample_height(w, p.z.c.seed, i, w.t_high);
        out[0] = std::abs(zeta::zeta_logderiv_from_zeros(table, w, t, a, p.z.halfwidth).value);
      },
      1, p.z.samples, p.z.c.workers, true);
  const auto vals = res.column(0);
  const auto grid = p.grid.empty() ? auto_grid(vals, 40) : parse_grid(p.grid);
  tail_rows(r, "zeta-logderiv-tail", fitted_or_raw(stats::empirical_survival(vals, grid)));
  r.constants["mean_modulus"] = res.mean(0);
  return r;
}

struct PairCorr {
  std::string side = "both";
  int n = 30;
  long samples = 20000;
  double halfwidth = 14.5;
  std::string sampler = "dense";
  double T = 0.0;
  long zeta_samples = 2000;
  TableOpts table;
  Common c;
};

double q2(double x, double y) { return 1.0 / ((1.0 + x * x) * (1.0 + y * y)); }

// int int_{[-h,h]^2} (1 - K(x - y)^2) Q(x) Q(y)
double pair_integral(const std::function<double(double)>& kernel, double h) {
  using boost::math::quadrature::gauss_kronrod;
  const auto inner = [&](double x) {
    return gauss_kronrod<double, 31>::integrate(
        [&](double y) {
          const double k = kernel(x - y);
          return (1.0 - k * k) * q2(x, y);
        },
        -h, h, 12, 1e-11);
  };
  return gauss_kronrod<double, 31>::integrate(inner, -h, h, 12, 1e-10);
}

Report pair_corr(const PairCorr& p) {
  Report r;
  if (p.side != "zeta") {
    stats::Experiment ex;
    ex.kind = "correlation";
    ex.n = p.n;
    ex.sampler = parse_sampler(p.sampler);
    ex.k = 2;
    ex.halfwidth = p.halfwidth;
    ex.eta = [](std::span<const double> x) { return q2(x[0], x[1]); };
    const auto rep = stats::mc_driver(ex, p.samples, p.c.seed, p.c.workers);
    const double oracle = pair_integral([&](double x) { return ratiodet::sine_kernel_n(p.n, x); }, p.halfwidth);
    r.add("pair-corr/cue", "monte-carlo", rep.correlation_mean, rep.correlation_stderr);
    r.add("pair-corr/cue", "determinantal", oracle);
    r.constants["cue"] = {{"mean", rep.correlation_mean}, {"stderr", rep.correlation_stderr}, {"oracle", oracle}};
    r.check("CUE correlation sum within 3 stderr of det2(K_N)",
            std::abs(rep.correlation_mean - oracle) <= 3.0 * rep.correlation_stderr);
    r.lines.push_back("CUE: " + format_short(rep.correlation_mean) + " +- " + format_short(rep.correlation_stderr) +
                      " vs " + format_short(oracle));
  }
  if (p.side != "cue") {
    const auto table = resolve_table(p.table, p.T > 0.0 ? 2.0 * p.T + 100.0 : 2100.0, r);
    const double T = p.T > 0.0 ? p.T : 0.5 * table.height_max;
    const auto w = zeta::make_window(T);
    // Zeros unfolded with the local density log(t / 2pi) / 2pi.
    const double reach = p.halfwidth * 2.0 * kPi / std::log(T / (2.0 * kPi));
    const double top = std::min(w.t_high, table.height_max - reach);
    require(top > w.t_low && T - reach >= table.covered_from(), ErrorKind::validation,
            "zero table does not cover the window for pair-corr");
    const auto res = stats::mc_run(
        [&](std::uint64_t i, std::span<double> out) {
          const double t = sample_height(w, p.c.seed, i, top);
          const double dens = std::log(t / (2.0 * kPi)) / (2.0 * kPi);
          const auto lo = std::lower_bound(table.ordinates.begin(), table.ordinates.end(), t - reach);
          const auto hi = std::upper_bound(table.ordinates.begin(), table.ordinates.end(), t + reach);
          std::vector<double> x;
          for (auto it = lo; it < hi; ++it) {
            const double u = dens * (*it - t);
            if (std::abs(u) <= p.halfwidth) x.push_back(u);
          }
          double s = 0.0;
          for (std::size_t a = 0; a < x.size(); ++a) {
            for (std::size_t b = 0; b < x.size(); ++b) {
              if (a != b) s += q2(x[a], x[b]);
            }
          }
          out[0] = s;
        },
        1, p.zeta_samples, p.c.workers, false);
    const double oracle = pair_integral(ratiodet::sine_kernel, p.halfwidth);
    const double rel = std::abs(res.mean(0) / oracle - 1.0);
    r.add("pair-corr/zeta", "empirical", res.mean(0), res.stderr_(0));
    r.add("pair-corr/zeta", "sine-kernel", oracle);
    r.constants["zeta"] = {{"T", T},           {"mean", res.mean(0)},  {"stderr", res.stderr_(0)},
                           {"oracle", oracle}, {"relative_gap", rel}, {"within_5_percent", rel <= 0.05}};
    r.lines.push_back("zeta: " + format_short(res.mean(0)) + " +- " + format_short(res.stderr_(0)) + " vs " +
                      format_short(oracle) + " (relative gap " + format_short(rel) + ", reported only)");
  }
  return r;
}

// ---- config capture and replay ----

json typed(const std::string& s) {
  long long i = 0;
  if (const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
      !s.empty() && ec == std::errc{} && p == s.data() + s.size()) {
    return i;
  }
  double d = 0.0;
  if (const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
      !s.empty() && ec == std::errc{} && p == s.data() + s.size() && std::isfinite(d)) {
    return d;
  }
  return s;
}

json capture_config(const CLI::App* sub, const std::vector<const CLI::Option*>& skip) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty() || std::find(skip.begin(), skip.end(), opt) != skip.end()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    std::vector<std::string> vals;
    if (opt->count() > 0) {
      vals = opt->results();
    } else {
      std::string d = opt->get_default_str();
      if (d.size() >= 2 && d.front() == '[' && d.back() == ']') {
        d = d.substr(1, d.size() - 2);
        if (!d.empty()) vals = split(d, ',');
      } else if (!d.empty()) {
        vals.push_back(d);
      }
    }
    if (vals.empty()) continue;
    if (opt->get_items_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : vals) arr.push_back(typed(v));
      cfg[name] = arr;
    } else {
      cfg[name] = typed(vals.back());
    }
  }
  return cfg;
}

std::string token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_short(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  fail(ErrorKind::validation, "replay: unsupported config value " + v.dump());
}

std::vector<std::string> replay_args(const std::string& path, const std::vector<std::string>& extra) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::io, "cannot read " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    fail(ErrorKind::validation, path + ": " + e.what());
  }
  require(j.contains("subcommand") && j.contains("config"), ErrorKind::validation,
          path + ": not a spectral-lab summary");
  std::vector<std::string> args{j.at("subcommand").get<std::string>()};
  for (const auto& [k, v] : j.at("config").items()) {
    args.push_back("--" + k);
    if (v.is_array()) {
      for (const auto& e : v) args.push_back(token(e));
    } else {
      args.push_back(token(v));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

int exit_code(const Error& e) { return e.kind() == ErrorKind::numeric ? 1 : 2; }

}  // namespace

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (const char c : raw) {
    if (c != ' ') s += c;
  }
  require(!s.empty(), ErrorKind::validation, "empty complex number");
  if (s.back() != 'i') return {to_double(s, "complex number"), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  const auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return to_double(t, "complex number '" + raw + "'");
  };
  if (cut == std::string::npos) return {0.0, imag_of(body)};
  return {to_double(body.substr(0, cut), "complex number '" + raw + "'"), imag_of(body.substr(cut))};
}

testfn::TestFunction parse_function(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(s.substr(colon + 1), ',');
  const auto need = [&](std::size_t k) {
    require(args.size() == k, ErrorKind::validation,
            "test function '" + s + "' expects " + std::to_string(k) + " parameter(s)");
  };
  testfn::TestFunction fn;
  if (kind == "Q") {
    need(0);
    fn = testfn::Q{};
  } else if (kind == "G") {
    need(0);
    fn = testfn::G{};
  } else if (kind == "Gk") {
    need(1);
    fn = testfn::Gk{to_int(args[0], "k")};
  } else if (kind == "J") {
    need(0);
    fn = testfn::J{};
  } else if (kind == "Weps") {
    need(1);
    fn = testfn::Weps{to_double(args[0], "eps")};
  } else if (kind == "WhatK") {
    need(1);
    fn = testfn::WhatK{to_int(args[0], "k")};
  } else if (kind == "Ialpha") {
    need(1);
    fn = testfn::Ialpha{parse_complex(args[0])};
  } else if (kind == "L") {
    need(2);
    fn = testfn::L{parse_complex(args[0]), parse_complex(args[1])};
  } else if (kind == "Ltrunc") {
    need(3);
    fn = testfn::Ltrunc{parse_complex(args[0]), parse_complex(args[1]), to_int(args[2], "k")};
  } else if (kind == "Indicator") {
    need(2);
    fn = testfn::Indicator{to_double(args[0], "lo"), to_double(args[1], "hi")};
  } else {
    fail(ErrorKind::validation, "unknown test function '" + s + "'");
  }
  testfn::validate(fn);
  return fn;
}

std::vector<double> parse_grid(const std::string& s) {
  const auto f = split(s, ':');
  require(f.size() == 3, ErrorKind::validation, "bad grid '" + s + "', expected lo:hi:points");
  const double lo = to_double(f[0], "grid bound"), hi = to_double(f[1], "grid bound");
  const int points = to_int(f[2], "grid size");
  require(points >= 2 && hi > lo, ErrorKind::validation, "bad grid '" + s + "'");
  return stats::linear_grid(lo, hi, points);
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = args_in;
  try {
    if (!args.empty() && args[0] == "--replay") {
      require(args.size() >= 2, ErrorKind::validation, "--replay needs a summary path");
      args = replay_args(args[1], {args.begin() + 2, args.end()});
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }

  CLI::App app{"Spectral statistics of CUE eigenangles and zeta zeros.\n"
               "Replay a run with: spectral-lab --replay <summary.json> [--out PREFIX]"};
  app.name("spectral-lab");
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  std::string out_prefix;
  std::string format = "text";
  std::vector<const CLI::Option*> output_opts;
  const auto output = [&](CLI::App* s) {
    output_opts.push_back(s->add_option("--out", out_prefix, "write <PREFIX>.csv and <PREFIX>.json"));
    output_opts.push_back(
        s->add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "csv", "json"})));
  };
  const auto fn_opt = [](CLI::App* s, std::string& fn, std::string& mode) {
    s->add_option("--fn", fn, "test function: Q, G, Gk:k, J, Weps:eps, WhatK:k, Ialpha:a, L:a,b, Ltrunc:a,b,k, "
                              "Indicator:lo,hi (complex as 1+2i)");
    s->add_option("--mode", mode, "linear statistic mode")->check(CLI::IsMember({"raw", "reference", "centered"}));
  };
  const auto sampler_opt = [](CLI::App* s, std::string& sampler) {
    s->add_option("--sampler", sampler, "CUE sampler")->check(CLI::IsMember({"dense", "verblunsky"}));
  };
  std::map<std::string, std::function<Report()>> commands;

  CueTail cue_tail_p;
  {
    auto* s = app.add_subcommand("cue-tail", "empirical tail of a CUE linear statistic with model fits");
    s->add_option("--n", cue_tail_p.n, "matrix size (count)")->check(CLI::PositiveNumber);
    fn_opt(s, cue_tail_p.fn, cue_tail_p.mode);
    sampler_opt(s, cue_tail_p.sampler);
    s->add_option("--grid", cue_tail_p.grid, "survival grid lo:hi:points (statistic units; default: data range)");
    add_mc_options(s, cue_tail_p.c, cue_tail_p.samples);
    output(s);
    commands["cue-tail"] = [&] { return cue_tail(cue_tail_p); };
  }
  CueMoments cue_moments_p;
  {
    auto* s = app.add_subcommand("cue-moments", "moments E X^l (E|X|^l for complex X) of a CUE linear statistic");
    s->add_option("--n", cue_moments_p.n, "matrix size (count)")->check(CLI::PositiveNumber);
    fn_opt(s, cue_moments_p.fn, cue_moments_p.mode);
    sampler_opt(s, cue_moments_p.sampler);
    s->add_option("--max-order", cue_moments_p.max_order, "highest moment order l (count)")
        ->check(CLI::PositiveNumber);
    add_mc_options(s, cue_moments_p.c, cue_moments_p.samples);
    output(s);
    commands["cue-moments"] = [&] { return cue_moments(cue_moments_p); };
  }
  DsCheck ds_p;
  {
    auto* s = app.add_subcommand("ds-check", "trace moments E|Tr g^j|^2 = j and a vanishing mixed moment");
    s->add_option("--n", ds_p.n, "matrix size (count)")->check(CLI::PositiveNumber);
    s->add_option("--jmax", ds_p.jmax, "highest trace power (count)")->check(CLI::PositiveNumber);
    sampler_opt(s, ds_p.sampler);
    add_mc_options(s, ds_p.c, ds_p.samples);
    output(s);
    commands["ds-check"] = [&] { return ds_check(ds_p); };
  }
  RatioArgs ratio_p;
  for (const auto& [name, help] : {std::pair{"ratio-finite", "exact finite-n ratio average (determinant formula)"},
                                   std::pair{"ratio-limit", "large-n limit of the ratio average"},
                                   std::pair{"ratio-mc", "Monte Carlo ratio average against the determinant"}}) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--alphas", ratio_p.alphas, "numerator shifts (complex, comma or space separated)")
        ->required()
        ->delimiter(',');
    s->add_option("--betas", ratio_p.betas, "denominator shifts, Re != 0 (complex)")->required()->delimiter(',');
    if (std::string(name) != "ratio-limit") {
      s->add_option("--n", ratio_p.n, "matrix size (count)")->check(CLI::PositiveNumber);
    }
    if (std::string(name) == "ratio-mc") {
      sampler_opt(s, ratio_p.sampler);
      add_mc_options(s, ratio_p.c, ratio_p.samples);
    }
    output(s);
  }
  commands["ratio-finite"] = [&] { return ratio_finite(ratio_p); };
  commands["ratio-limit"] = [&] { return ratio_limit(ratio_p); };
  commands["ratio-mc"] = [&] { return ratio_mc(ratio_p); };
  SineCorr sine_p;
  {
    auto* s = app.add_subcommand("sine-corr", "sine-kernel correlation determinants");
    s->add_option("--points", sine_p.points, "points for det[K(x_i - x_j)] (unfolded units)")->delimiter(',');
    s->add_option("--kernel", sine_p.kernel, "kernel")->check(CLI::IsMember({"limit", "finite"}));
    s->add_option("--n", sine_p.n, "matrix size for the finite kernel (count)")->check(CLI::NonNegativeNumber);
    s->add_option("--grid", sine_p.grid, "pair-correlation grid lo:hi:points when --points is absent");
    output(s);
    commands["sine-corr"] = [&] { return sine_corr(sine_p); };
  }
  LogderivId logderiv_p;
  {
    auto* s = app.add_subcommand("logderiv-id", "characteristic polynomial log-derivative against <I_alpha, E~>");
    s->add_option("--n", logderiv_p.n, "matrix size (count)")->check(CLI::PositiveNumber);
    s->add_option("--alphas", logderiv_p.alphas, "shifts with Re > 0 (complex)")->delimiter(',');
    sampler_opt(s, logderiv_p.sampler);
    add_mc_options(s, logderiv_p.c, logderiv_p.samples);
    output(s);
    commands["logderiv-id"] = [&] { return logderiv_id(logderiv_p); };
  }
  ZetaIngest ingest_p;
  {
    auto* s = app.add_subcommand("zeta-ingest", "read and validate a zero table");
    s->add_option("--in", ingest_p.in, "zero table path")->required();
    s->add_option("--format", ingest_p.format, "table format")->check(CLI::IsMember({"plain", "offset"}));
    output_opts.push_back(s->add_option("--out", out_prefix, "write <PREFIX>.csv and <PREFIX>.json"));
    commands["zeta-ingest"] = [&] { return zeta_ingest(ingest_p); };
  }
  ZetaLocate locate_p;
  {
    auto* s = app.add_subcommand("zeta-locate", "zeros of Hardy's Z by sign changes and refinement");
    s->add_option("--from", locate_p.from, "lower height (t units)")->check(CLI::NonNegativeNumber);
    s->add_option("--to", locate_p.to, "upper height, at most 5e4 (t units)")->check(CLI::PositiveNumber);
    s->add_option("--tol", locate_p.tol, "absolute ordinate tolerance (t units, >= 1e-9)");
    s->add_option("--reference", locate_p.reference, "reference zero table to compare against");
    s->add_option("--reference-format", locate_p.reference_format, "reference table format")
        ->check(CLI::IsMember({"plain", "offset"}));
    s->add_option("--compare", locate_p.compare, "number of leading zeros to compare (count)");
    output(s);
    commands["zeta-locate"] = [&] { return zeta_locate(locate_p); };
  }
  ExplicitFormula explicit_p;
  {
    auto* s = app.add_subcommand("explicit-formula", "zero side against prime side for B-spline test functions");
    s->add_option("--splines", explicit_p.splines,
                  "test functions m,h,c[,w] (order, knot step and centre in log-x units, weight); "
                  "join terms with '+'; default: a family of five");
    add_table_options(s, explicit_p.table);
    output(s);
    commands["explicit-formula"] = [&] { return explicit_formula(explicit_p); };
  }
  ZetaTail zeta_tail_p;
  {
    auto* s = app.add_subcommand("zeta-tail", "empirical tail of a zero linear statistic over sampled heights");
    add_sampling_options(s, zeta_tail_p.z);
    fn_opt(s, zeta_tail_p.fn, zeta_tail_p.mode);
    s->add_option("--grid", zeta_tail_p.grid, "survival grid lo:hi:points (default: data range)");
    output(s);
    commands["zeta-tail"] = [&] { return zeta_tail(zeta_tail_p); };
  }
  ZetaCountTail count_p;
  {
    auto* s = app.add_subcommand("zeta-count-tail", "tail of N(t + 1/log T) - N(t) over sampled heights");
    s->add_option("--T", count_p.T, "window base height (t units; 0 = top dyadic window of the table)")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--samples", count_p.samples, "number of sampled heights (count)")->check(CLI::PositiveNumber);
    s->add_option("--seed", count_p.c.seed, "64-bit stream seed");
    s->add_option("--workers", count_p.c.workers, "worker threads (results do not depend on this)")
        ->check(CLI::PositiveNumber);
    add_table_options(s, count_p.table);
    output(s);
    commands["zeta-count-tail"] = [&] { return zeta_count_tail(count_p); };
  }
  ZetaRatio zratio_p;
  {
    auto* s = app.add_subcommand("zeta-ratio", "zeta ratio rebuilt from zeros against Euler-Maclaurin");
    s->add_option("--T", zratio_p.T, "window base height (t units)")->check(CLI::PositiveNumber);
    s->add_option("--t-from", zratio_p.t_from, "first height (t units)");
    s->add_option("--t-to", zratio_p.t_to, "last height (t units)");
    s->add_option("--points", zratio_p.points, "evenly spaced heights (count)")->check(CLI::PositiveNumber);
    s->add_option("--alpha", zratio_p.alpha, "numerator shift in units of 1/log T (complex)");
    s->add_option("--beta", zratio_p.beta, "denominator shift in units of 1/log T, Re != 0 (complex)");
    s->add_option("--halfwidth", zratio_p.halfwidth, "zero window halfwidth (t units; 0 = full table)")
        ->check(CLI::NonNegativeNumber);
    add_table_options(s, zratio_p.table);
    output(s);
    commands["zeta-ratio"] = [&] { return zeta_ratio(zratio_p); };
  }
  ZetaLogderivTail zlog_p;
  {
    auto* s = app.add_subcommand("zeta-logderiv-tail", "tail of |zeta'/zeta| rebuilt from zeros over sampled heights");
    add_sampling_options(s, zlog_p.z);
    s->add_option("--alpha", zlog_p.alpha, "shift in units of 1/log T, Re > 0 (complex)");
    s->add_option("--grid", zlog_p.grid, "survival grid lo:hi:points (default: data range)");
    output(s);
    commands["zeta-logderiv-tail"] = [&] { return zeta_logderiv_tail(zlog_p); };
  }
  PairCorr pair_p;
  {
    auto* s = app.add_subcommand("pair-corr", "pair correlation sums against the sine-kernel determinant");
    s->add_option("--side", pair_p.side, "which side to run")->check(CLI::IsMember({"cue", "zeta", "both"}));
    s->add_option("--n", pair_p.n, "CUE matrix size (count)")->check(CLI::PositiveNumber);
    s->add_option("--halfwidth", pair_p.halfwidth, "window halfwidth (unfolded units, < n/2)")
        ->check(CLI::PositiveNumber);
    sampler_opt(s, pair_p.sampler);
    add_mc_options(s, pair_p.c, pair_p.samples);
    s->add_option("--T", pair_p.T, "zeta window base height (t units; 0 = top dyadic window)")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--zeta-samples", pair_p.zeta_samples, "sampled heights on the zeta side (count)")
        ->check(CLI::PositiveNumber);
    add_table_options(s, pair_p.table);
    output(s);
    commands["pair-corr"] = [&] { return pair_corr(pair_p); };
  }

  if (!args.empty() && args[0].front() != '-' && !commands.count(args[0])) {
    err << "error: unknown subcommand '" << args[0] << "'\nRun with --help for more information.\n";
    return 2;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    Report r = commands.at(sub->get_name())();
    r.subcommand = sub->get_name();
    r.config = capture_config(sub, output_opts);
    if (!out_prefix.empty()) write_files(r, out_prefix);
    emit(r, format == "csv" ? Format::csv : format == "json" ? Format::json : Format::text, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace speclab::cli
