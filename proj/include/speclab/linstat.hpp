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
#include <string>

namespace speclab {

enum class LinStatMode { raw, reference, centered };

/// A linear statistic split into its periodized (or zero) sum, the smooth
/// reference density term, and their difference.
struct LinStatResult {
  std::complex<double> raw;
  std::complex<double> reference;
  std::complex<double> centered;
  double truncation_bound = 0.0;  // bound on the omitted terms, 0 for closed forms
  long terms = 0;                 // number of explicit summands
  std::string route;

  std::complex<double> value(LinStatMode mode) const {
    switch (mode) {
      case LinStatMode::raw:
        return raw;
      case LinStatMode::reference:
        return reference;
      case LinStatMode::centered:
        break;
    }
    return centered;
  }
};

}  // namespace speclab
