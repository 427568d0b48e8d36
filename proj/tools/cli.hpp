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
#include <iosfwd>
#include <string>
#include <vector>

#include "speclab/testfn.hpp"

namespace speclab::cli {

/// Runs one subcommand; args exclude the program name.
/// Exit codes: 0 success, 1 numeric failure, 2 validation or usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1", "-2.5", "0.5i", "1+2i", "3-0.25i".
std::complex<double> parse_complex(const std::string& s);

/// "Q", "G", "Gk:4", "J", "Weps:0.5", "WhatK:8", "Ialpha:1+2i", "L:2,1",
/// "Ltrunc:2,1,8", "Indicator:0,0.159".
testfn::TestFunction parse_function(const std::string& s);

/// "lo:hi:points".
std::vector<double> parse_grid(const std::string& s);

}  // namespace speclab::cli
