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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "obsent/hermitian.hpp"
#include "obsent/sampling.hpp"

using namespace obsent;

namespace {

ComplexMatrix random_hermitian(Rng& rng, Index d) {
  ComplexMatrix g(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return ComplexMatrix(0.5 * (g + g.adjoint()));
}

ComplexMatrix random_psd(Rng& rng, Index d, Index rank) {
  ComplexMatrix g(d, rank);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rank; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  return ComplexMatrix(g * g.adjoint());
}

}  // namespace

TEST_CASE("eigendecomposition reconstructs the operator", "[hermitian]") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.below(7));
    const HermitianOperator a(random_hermitian(rng, d));
    const EigenDecomposition e = eig_hermitian(a);
    const ComplexMatrix rebuilt =
        e.eigenvectors * e.eigenvalues.asDiagonal() * e.eigenvectors.adjoint();
    INFO("trial " << trial << " dim " << d);
    REQUIRE(max_abs(rebuilt - a.matrix()) <= 1e-9 * std::max(1.0, max_abs(a.matrix())));
    for (Index i = 0; i + 1 < d; ++i) REQUIRE(e.eigenvalues[i] >= e.eigenvalues[i + 1]);
    REQUIRE(max_abs(e.eigenvectors.adjoint() * e.eigenvectors - identity_matrix(d)) <= 1e-12);
  }
}

TEST_CASE("known spectra", "[hermitian]") {
  ComplexMatrix ones(2, 2);
  ones << 1, 1, 1, 1;
  const EigenDecomposition e = eig_hermitian(HermitianOperator(ones));
  REQUIRE(e.eigenvalues[0] == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(e.eigenvalues[1] == Catch::Approx(0.0).margin(1e-12));

  ComplexMatrix pauli_x(2, 2);
  pauli_x << 0, 1, 1, 0;
  const EigenDecomposition x = eig_hermitian(HermitianOperator(pauli_x));
  REQUIRE(x.eigenvalues[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(x.eigenvalues[1] == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("spectral_fn with the identity map reproduces the input", "[hermitian]") {
  Rng rng(102);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.below(6));
    const HermitianOperator a(random_hermitian(rng, d));
    const HermitianOperator same = spectral_fn(a, [](double x) { return x; });
    REQUIRE(max_abs(same.matrix() - a.matrix()) <= 1e-10 * std::max(1.0, max_abs(a.matrix())));
  }
}

TEST_CASE("spectral_fn exp of log restores a positive operator", "[hermitian]") {
  Rng rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.below(5));
    const HermitianOperator a(random_psd(rng, d, d) + 0.1 * identity_matrix(d));
    const HermitianOperator lg = spectral_fn(a, [](double x) { return std::log(x); });
    const HermitianOperator back = spectral_fn(lg, [](double x) { return std::exp(x); });
    REQUIRE(max_abs(back.matrix() - a.matrix()) <= 1e-9 * std::max(1.0, max_abs(a.matrix())));
  }
}

TEST_CASE("spectral_fn support mode maps the kernel to zero", "[hermitian]") {
  Rng rng(104);
  const Index d = 5;
  const HermitianOperator a(random_psd(rng, d, 2));
  const HermitianOperator lg =
      spectral_fn(a, [](double x) { return std::log(x); }, true);
  REQUIRE(lg.matrix().allFinite());
  const HermitianOperator p = support_projector(a);
  REQUIRE(max_abs(p.matrix() * lg.matrix() * p.matrix() - lg.matrix()) <= 1e-9);
}

TEST_CASE("spectral_fn rejects non-finite images outside support mode", "[hermitian]") {
  Rng rng(105);
  const HermitianOperator a(random_psd(rng, 4, 2));
  REQUIRE_THROWS_AS(spectral_fn(a, [](double x) { return std::log(x); }), DomainError);
}

TEST_CASE("support projector fixes PSD operators", "[hermitian]") {
  Rng rng(106);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.below(6));
    const Index rank = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(d)));
    const HermitianOperator a(random_psd(rng, d, rank));
    const HermitianOperator p = support_projector(a);
    REQUIRE(max_abs(p.matrix() * p.matrix() - p.matrix()) <= 1e-10);
    REQUIRE(max_abs(p.matrix() * a.matrix() * p.matrix() - a.matrix()) <=
            1e-9 * std::max(1.0, max_abs(a.matrix())));
    REQUIRE(std::abs(p.trace() - static_cast<double>(rank)) <= 1e-9);
  }
}

TEST_CASE("trace norm dominates the trace and matches known values", "[hermitian]") {
  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 2 + static_cast<Index>(rng.below(6));
    const HermitianOperator a(random_hermitian(rng, d));
    REQUIRE(trace_norm(a.matrix()) >= std::abs(a.trace()) - 1e-10);
  }
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -4.0;
  REQUIRE(trace_norm(m) == Catch::Approx(7.0).margin(1e-10));
}

TEST_CASE("construction rejects malformed input", "[hermitian]") {
  REQUIRE_THROWS_AS(HermitianOperator(ComplexMatrix::Zero(2, 3)), NonSquare);

  ComplexMatrix skew(2, 2);
  skew << 0, 1, -1, 0;
  REQUIRE_THROWS_AS(HermitianOperator(skew), NotHermitian);

  ComplexMatrix nan_mat = ComplexMatrix::Zero(2, 2);
  nan_mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(HermitianOperator(nan_mat), NonFinite);
}

TEST_CASE("asymmetry within tolerance is symmetrized away", "[hermitian]") {
  ComplexMatrix nearly = identity_matrix(2);
  nearly(0, 1) = Complex(0.0, 5e-9);
  const HermitianOperator h(nearly);
  REQUIRE(max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);
}

TEST_CASE("hermitize averages the adjoint", "[hermitian]") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 0), Complex(2, 1), Complex(2, -1), Complex(3, 0);
  m(0, 1) += Complex(0, 1e-9);
  const HermitianOperator h = hermitize(m);
  REQUIRE(max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);
  REQUIRE(std::abs(h.matrix()(0, 0).real() - 1.0) <= 1e-12);
}
