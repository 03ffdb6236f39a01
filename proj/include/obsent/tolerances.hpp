// Copyright 2026 obsent contributors
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

#include <cstddef>

namespace obsent::tol {

// Input acceptance.
inline constexpr double herm_input = 1e-8;      // max-norm asymmetry accepted by hermitize
inline constexpr double psd = 1e-9;             // eigenvalue >= -psd accepted, clipped to 0
inline constexpr double trace_renorm = 1e-6;    // |tr - 1| renormalized silently for states
inline constexpr double povm_sum = 1e-8;        // max-norm distance of sum(elements) from identity
inline constexpr double volume_sum = 1e-7;      // |sum of volumes - dim|
inline constexpr double trace_preserving = 1e-8;  // instrument completeness in max-norm
inline constexpr double stochastic_sum = 1e-10;   // column sums of stochastic matrices
inline constexpr double dist_sum = 1e-9;          // |sum of probabilities - 1|

// Numerical kernels.
inline constexpr double support = 1e-12;     // eigenvalue support cutoff, relative to largest
inline constexpr double prob_floor = 1e-12;  // classical probabilities below this count as zero
inline constexpr double support_leak = 1e-9;  // trace-norm mass tolerated outside a support

// Verification checks.
inline constexpr double identity = 1e-9;   // two-sided identity residual
inline constexpr double inequality = 1e-8;  // one-sided slack allowance
inline constexpr double equality = 1e-9;    // gap counts as zero below this
inline constexpr double state_eq = 1e-7;    // trace-norm state equality
inline constexpr double dist_eq = 1e-9;     // max-norm distribution equality

inline constexpr std::size_t branch_cap = 1000000;  // composed-outcome safety cap

}  // namespace obsent::tol
