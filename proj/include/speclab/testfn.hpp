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
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace speclab::testfn {

using cplx = std::complex<double>;

/// Normalisation of G chosen so that Q <= G on the real line.
inline constexpr double kB0 = 2.0 * std::numbers::pi * std::numbers::pi;

struct Q {};
struct G {};
struct Gk {
  int k = 1;
};
struct J {};
/// The compactly supported odd pre-image W^(eps)(x); evaluated pointwise.
struct Weps {
  double eps = 1.0;
};
/// Fourier transform of W^(1/k).
struct WhatK {
  int k = 1;
};
struct Ialpha {
  cplx alpha;
};
/// Principal Log of (alpha/2pi - i xi)/(beta/2pi - i xi); real arguments only.
struct L {
  cplx alpha;
  cplx beta;
};
/// L minus i(alpha - beta) times the transform of W^(1/k); decays quadratically.
struct Ltrunc {
  cplx alpha;
  cplx beta;
  int k = 1;
};
/// Transform of a piecewise-linear pre-image sampled on a uniform grid of
/// [-halfwidth, halfwidth] (samples.size() >= 2 nodes, endpoints included).
struct BandLimited {
  std::vector<cplx> samples;
  double halfwidth = 1.0;

  double spacing() const { return 2.0 * halfwidth / static_cast<double>(samples.size() - 1); }
};
/// Indicator of [lo, hi], midpoint-valued at both ends.
struct Indicator {
  double lo = 0.0;
  double hi = 1.0;
};

using TestFunction = std::variant<Q, G, Gk, J, Weps, WhatK, Ialpha, L, Ltrunc, BandLimited, Indicator>;

std::string name(const TestFunction& fn);

/// Throws ErrorKind::domain when parameters violate the kind's invariants.
void validate(const TestFunction& fn);

cplx eval(const TestFunction& fn, cplx z);
inline cplx eval(const TestFunction& fn, double x) { return eval(fn, cplx{x, 0.0}); }

/// Fourier transform of G_k at real x: k * G^(kx), supported on [-1/k, 1/k].
cplx fourier_Gk(int k, double x);

/// Transform of W^(1/k) through the tent-integral representation
/// (i/2)[A(1 + i2pi z) - A(1 - i2pi z)], entire in z.
cplx what_tent(int k, cplx z);

/// Transform of W^(1/k) through J(z) + (k/2i)(K(z) - K(-z)).
cplx what_closed_form(int k, cplx z);

/// Integral over [0, width] of (1 - u/width) e^{-s u}; entire in s.
cplx tent_integral(cplx s, double width);

/// Symmetric-limit integral of fn over the real line.
cplx reference_integral(const TestFunction& fn);

/// Symmetric-limit integral for every kind with a finite limit. Extends
/// reference_integral to L and Ltrunc (including jumps of the principal Log
/// along the real line) and to W^eps.
cplx symmetric_integral(const TestFunction& fn);

/// Midpoint-valued Fourier pre-image F with fn = F^.
cplx preimage(const TestFunction& fn, double x);

struct PreimageDecay {
  bool compact = false;
  double halfwidth = 0.0;  // support radius when compact
  double rate = 0.0;       // |F(x)| <= amplitude * exp(-rate |x|) otherwise
  double amplitude = 0.0;
};
PreimageDecay preimage_decay(const TestFunction& fn);

/// Leading behaviour fn(xi) ~ a1/xi + a2/xi^2 for |xi| -> infinity, with
/// mean-zero oscillating parts dropped.
struct TailAsymptotics {
  cplx a1{0.0, 0.0};
  cplx a2{0.0, 0.0};
};
TailAsymptotics tail_asymptotics(const TestFunction& fn);

bool is_odd(const TestFunction& fn);

/// Symmetric lattice sum sum_nu fn(offset + period * nu) for integer period,
/// evaluated in closed form from the partial-fraction expansions of cot and
/// csc^2 (or by explicit summation plus a Hurwitz-zeta tail for L kinds).
cplx periodized_sum(const TestFunction& fn, double offset, int period);

/// Symmetric lattice sums of simple and double poles.
cplx lattice_cot(cplx z, double period);
cplx lattice_csc2(cplx z, double period);

struct EnvelopeReport {
  double max_ratio_QG = 0.0;
  double max_ratio_JW = 0.0;
};
EnvelopeReport envelope_check(int k, std::span<const double> grid);

}  // namespace speclab::testfn
