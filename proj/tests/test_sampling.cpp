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

#include "obsent/sampling.hpp"

using namespace obsent;

namespace {

SamplerConfig cfg_at(std::uint64_t seed, Index dim) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.dim = dim;
  return cfg;
}

}  // namespace

TEST_CASE("generator streams depend only on the seed", "[sampling]") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_differ = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t xa = a.next();
    all_equal = all_equal && (xa == b.next());
    any_differ = any_differ || (xa != c.next());
  }
  REQUIRE(all_equal);
  REQUIRE(any_differ);
}

TEST_CASE("uniform draws stay inside the half-open unit interval", "[sampling]") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("normal draws have sane first moments", "[sampling]") {
  Rng rng(11);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  REQUIRE(std::abs(sum / n) < 0.02);
  REQUIRE(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("seed mixing is deterministic and salt-sensitive", "[sampling]") {
  REQUIRE(mix_seed(1, 2) == mix_seed(1, 2));
  REQUIRE(mix_seed(1, 2) != mix_seed(1, 3));
  REQUIRE(mix_seed(1, 2) != mix_seed(2, 2));
}

TEST_CASE("haar matrices are unitary", "[sampling]") {
  Rng rng(5);
  for (Index d = 2; d <= 6; ++d) {
    const ComplexMatrix u = haar_unitary(rng, d);
    REQUIRE(max_abs(u.adjoint() * u - identity_matrix(d)) <= 1e-12);
    REQUIRE(max_abs(u * u.adjoint() - identity_matrix(d)) <= 1e-12);
  }
  const ComplexMatrix v = haar_isometry(rng, 6, 2);
  REQUIRE(max_abs(v.adjoint() * v - identity_matrix(2)) <= 1e-12);
  REQUIRE_THROWS_AS(haar_isometry(rng, 2, 3), DimensionMismatch);
}

TEST_CASE("pure samples are rank one", "[sampling]") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const DensityMatrix rho = random_pure(cfg_at(s, 4));
    const double purity = (rho.matrix() * rho.matrix()).trace().real();
    REQUIRE(purity == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("mixed samples honor the rank parameter", "[sampling]") {
  SECTION("full rank by default") {
    const DensityMatrix rho = random_mixed(cfg_at(3, 5));
    REQUIRE(rho.eigenvalues().minCoeff() > 1e-6);
  }
  SECTION("restricted rank zeroes the tail of the spectrum") {
    SamplerConfig cfg = cfg_at(4, 5);
    cfg.rank = 2;
    const DensityMatrix rho = random_mixed(cfg);
    // Eigenvalues are sorted descending, so the kernel sits at the end.
    for (Index i = 2; i < 5; ++i) REQUIRE(std::abs(rho.eigenvalues()[i]) <= 1e-10);
    REQUIRE(rho.eigenvalues()[1] > 1e-8);
  }
}

TEST_CASE("sampled measurements are complete", "[sampling]") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    SamplerConfig cfg = cfg_at(100 + s, 2 + static_cast<Index>(s % 4));
    cfg.outcome_count = 2 + static_cast<Index>(s % 3);
    const Povm c = random_povm(cfg);
    REQUIRE(c.size() == static_cast<std::size_t>(cfg.outcome_count));
    ComplexMatrix sum = ComplexMatrix::Zero(cfg.dim, cfg.dim);
    for (const auto& e : c.elements()) sum += e;
    REQUIRE(max_abs(sum - identity_matrix(cfg.dim)) <= 1e-8);
  }
}

TEST_CASE("projective mode yields an orthonormal rank-one basis", "[sampling]") {
  SamplerConfig cfg = cfg_at(9, 4);
  cfg.projective = true;
  const Povm c = random_povm(cfg);
  REQUIRE(c.size() == 4);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const ComplexMatrix& p = c.element(i);
    REQUIRE(max_abs(p * p - p) <= 1e-10);
    REQUIRE(p.trace().real() == Catch::Approx(1.0).margin(1e-10));
    for (std::size_t j = i + 1; j < c.size(); ++j)
      REQUIRE(max_abs(p * c.element(j)) <= 1e-10);
  }
}

TEST_CASE("sampled instruments preserve trace", "[sampling]") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    SamplerConfig cfg = cfg_at(200 + s, 2 + static_cast<Index>(s % 3));
    cfg.outcome_count = 2 + static_cast<Index>(s % 2);
    cfg.kraus_count = 1 + static_cast<Index>(s % 3);
    const Instrument inst = random_instrument(cfg);
    REQUIRE(inst.size() == static_cast<std::size_t>(cfg.outcome_count));
    ComplexMatrix sum = ComplexMatrix::Zero(cfg.dim, cfg.dim);
    for (const auto& b : inst.branches()) {
      REQUIRE(b.kraus().size() == static_cast<std::size_t>(cfg.kraus_count));
      sum += b.povm_element();
    }
    REQUIRE(max_abs(sum - identity_matrix(cfg.dim)) <= 1e-10);
  }
}

TEST_CASE("sampled stochastic matrices are column normalized", "[sampling]") {
  const StochasticMatrix v = random_stochastic(cfg_at(15, 2), 3, 5);
  REQUIRE(v.rows() == 3);
  REQUIRE(v.cols() == 5);
  for (Index j = 0; j < 5; ++j) {
    double sum = 0.0;
    for (Index i = 0; i < 3; ++i) {
      REQUIRE(v(i, j) >= 0.0);
      sum += v(i, j);
    }
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("identity mode") {
    SamplerConfig cfg = cfg_at(16, 2);
    cfg.identity = true;
    const StochasticMatrix id = random_stochastic(cfg, 4, 4);
    REQUIRE((id.matrix() - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE_THROWS_AS(random_stochastic(cfg, 3, 4), DimensionMismatch);
  }
  REQUIRE_THROWS_AS(random_stochastic(cfg_at(17, 2), 0, 4), DimensionMismatch);
}

TEST_CASE("samples are bit-identical for equal configs", "[sampling]") {
  SamplerConfig cfg = cfg_at(77, 4);
  cfg.outcome_count = 3;
  const DensityMatrix r1 = random_mixed(cfg);
  const DensityMatrix r2 = random_mixed(cfg);
  REQUIRE(r1.matrix() == r2.matrix());
  const Povm c1 = random_povm(cfg);
  const Povm c2 = random_povm(cfg);
  for (std::size_t i = 0; i < c1.size(); ++i) REQUIRE(c1.element(i) == c2.element(i));
  const Instrument i1 = random_instrument(cfg);
  const Instrument i2 = random_instrument(cfg);
  for (std::size_t i = 0; i < i1.size(); ++i)
    for (std::size_t k = 0; k < i1.branch(i).kraus().size(); ++k)
      REQUIRE(i1.branch(i).kraus()[k] == i2.branch(i).kraus()[k]);
  SamplerConfig other = cfg;
  other.seed = 78;
  REQUIRE(random_mixed(other).matrix() != r1.matrix());
}
