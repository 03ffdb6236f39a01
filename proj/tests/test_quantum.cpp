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
#include <numeric>

#include "obsent/quantum.hpp"
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

TEST_CASE("density matrix construction validates and renormalizes", "[quantum]") {
  SECTION("negative eigenvalue beyond tolerance is rejected") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.001;
    m(1, 1) = -0.001;
    REQUIRE_THROWS_AS(DensityMatrix(m), DomainError);
  }
  SECTION("eigenvalue within the PSD tolerance is clipped to zero") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1e-10;
    const DensityMatrix rho(m);
    REQUIRE(rho.eigenvalues().minCoeff() >= 0.0);
    REQUIRE(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
  }
  SECTION("trace within the renormalization window is fixed") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 0.5 + 2e-7;
    m(1, 1) = 0.5;
    const DensityMatrix rho(m);
    REQUIRE(std::abs(rho.matrix().trace().real() - 1.0) <= 1e-12);
  }
  SECTION("trace far from one is rejected") {
    REQUIRE_THROWS_AS(DensityMatrix(ComplexMatrix(0.9 * identity_matrix(2))), DomainError);
  }
  SECTION("factories") {
    const DensityMatrix mm = DensityMatrix::maximally_mixed(3);
    REQUIRE(max_abs(mm.matrix() - identity_matrix(3) / 3.0) <= 1e-14);
    ComplexVector ket(2);
    ket << Complex(3, 0), Complex(4, 0);
    const DensityMatrix p = DensityMatrix::pure(ket);
    REQUIRE(p.eigenvalues().maxCoeff() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(p.matrix()(0, 0).real() == Catch::Approx(9.0 / 25.0).margin(1e-12));
  }
}

TEST_CASE("POVM construction enforces completeness and drops zero elements", "[quantum]") {
  SECTION("defect beyond tolerance rejected") {
    std::vector<ComplexMatrix> bad{0.9 * identity_matrix(2)};
    REQUIRE_THROWS_AS(Povm(std::move(bad)), InvariantViolation);
  }
  SECTION("negative element rejected") {
    ComplexMatrix a = identity_matrix(2);
    a(0, 0) = 1.5;
    ComplexMatrix b = identity_matrix(2) - a;
    REQUIRE_THROWS_AS(Povm({a, b}), DomainError);
  }
  SECTION("zero element dropped with its label recorded") {
    const Povm p({identity_matrix(2), ComplexMatrix::Zero(2, 2)}, {"keep", "drop"});
    REQUIRE(p.size() == 1);
    REQUIRE(p.labels() == std::vector<std::string>{"keep"});
    REQUIRE(p.dropped_labels() == std::vector<std::string>{"drop"});
  }
  SECTION("volumes sum to the dimension") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      SamplerConfig cfg = cfg_at(300 + s, 2 + static_cast<Index>(s % 4));
      cfg.outcome_count = 2 + static_cast<Index>(s % 3);
      const Povm p = random_povm(cfg);
      const double vol = std::accumulate(p.volumes().begin(), p.volumes().end(), 0.0);
      REQUIRE(std::abs(vol - static_cast<double>(p.dim())) <= 1e-7);
    }
  }
}

TEST_CASE("Lueders promotion reproduces the POVM", "[quantum]") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    SamplerConfig cfg = cfg_at(400 + s, 2 + static_cast<Index>(s % 4));
    cfg.outcome_count = 2 + static_cast<Index>(s % 3);
    const Povm p = random_povm(cfg);
    const Povm back = povm_of_instrument(Instrument::lueders(p));
    REQUIRE(back.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      REQUIRE(max_abs(back.element(i) - p.element(i)) <= 1e-9);
  }
}

TEST_CASE("instrument statistics agree with POVM statistics", "[quantum]") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const Index d = 2 + static_cast<Index>(s % 4);
    SamplerConfig cfg = cfg_at(500 + s, d);
    cfg.outcome_count = 2 + static_cast<Index>(s % 3);
    cfg.kraus_count = 1 + static_cast<Index>(s % 2);
    const Instrument inst = random_instrument(cfg);
    const DensityMatrix rho = random_mixed(cfg_at(900 + s, d));
    const OutcomeStatistics stats = outcome_statistics(rho, inst);
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const double via_branch = inst.branch(i).apply(rho.matrix()).trace().real();
      REQUIRE(std::abs(stats.probabilities[i] - via_branch) <= 1e-10);
    }
  }
}

TEST_CASE("composition satisfies the stepwise dual recursion", "[quantum]") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const Index d = 2 + static_cast<Index>(s % 3);
    SamplerConfig ca = cfg_at(600 + s, d);
    ca.outcome_count = 2;
    ca.kraus_count = 1 + static_cast<Index>(s % 2);
    SamplerConfig cb = cfg_at(700 + s, d);
    cb.outcome_count = 3;
    const Instrument a = random_instrument(ca);
    const Instrument b = random_instrument(cb);
    const Povm pb = povm_of_instrument(b);
    const Povm joint = povm_of_instrument(compose_sequence(CoarseGrainingSequence({a, b})));

    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j, ++idx) {
        const ComplexMatrix expected = a.branch(i).apply_dual(pb.element(j));
        INFO("branch " << joint.labels()[idx]);
        REQUIRE(joint.labels()[idx] == "(" + a.labels()[i] + "," + b.labels()[j] + ")");
        REQUIRE(max_abs(joint.element(idx) - expected) <= 1e-9);
      }
  }
}

TEST_CASE("single-step composition is the step itself", "[quantum]") {
  SamplerConfig cfg = cfg_at(42, 3);
  cfg.outcome_count = 2;
  const Instrument inst = random_instrument(cfg);
  const Instrument same = compose_sequence(CoarseGrainingSequence({inst}));
  REQUIRE(same.labels() == inst.labels());
  REQUIRE(same.size() == inst.size());
}

TEST_CASE("composition respects the branch cap", "[quantum]") {
  SamplerConfig cfg = cfg_at(43, 2);
  cfg.outcome_count = 4;
  const Instrument inst = random_instrument(cfg);
  const CoarseGrainingSequence seq({inst, inst, inst});
  REQUIRE_THROWS_AS(compose_sequence(seq, 10), BranchExplosion);
  REQUIRE(compose_sequence(seq, 64).size() == 64);
}

TEST_CASE("Kraus representation choice does not change observables", "[quantum]") {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const Index d = 2 + static_cast<Index>(s % 3);
    SamplerConfig cfg = cfg_at(800 + s, d);
    cfg.outcome_count = 2;
    cfg.kraus_count = 2;
    const Instrument inst = random_instrument(cfg);

    Rng rng(mix_seed(4242, s));
    std::vector<KrausMap> mixed;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const auto& ops = inst.branch(i).kraus();
      const Index m = static_cast<Index>(ops.size());
      const ComplexMatrix u = haar_unitary(rng, m);
      std::vector<ComplexMatrix> rotated(ops.size(), ComplexMatrix::Zero(d, d));
      for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k)
          rotated[static_cast<std::size_t>(j)] += u(j, k) * ops[static_cast<std::size_t>(k)];
      mixed.emplace_back(std::move(rotated));
    }
    const Instrument other(std::move(mixed), inst.labels());

    const DensityMatrix rho = random_mixed(cfg_at(950 + s, d));
    const Povm pa = povm_of_instrument(inst);
    const Povm pb = povm_of_instrument(other);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      REQUIRE(max_abs(pa.element(i) - pb.element(i)) <= 1e-9);
      REQUIRE(max_abs(inst.branch(i).apply(rho.matrix()) - other.branch(i).apply(rho.matrix())) <=
              1e-9);
    }
    const OutcomeStatistics sa = outcome_statistics(rho, inst);
    const OutcomeStatistics sb = outcome_statistics(rho, other);
    for (std::size_t i = 0; i < sa.probabilities.size(); ++i)
      REQUIRE(std::abs(sa.probabilities[i] - sb.probabilities[i]) <= 1e-9);
  }
}

TEST_CASE("stochastic coarse-graining preserves total volume", "[quantum]") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index d = 2 + static_cast<Index>(s % 4);
    SamplerConfig cfg = cfg_at(1000 + s, d);
    cfg.outcome_count = 3 + static_cast<Index>(s % 2);
    const Povm fine = random_povm(cfg);
    const StochasticMatrix v =
        random_stochastic(cfg_at(1100 + s, d), 2, static_cast<Index>(fine.size()));
    const Povm coarse = apply_stochastic(fine, v);
    const double vol =
        std::accumulate(coarse.volumes().begin(), coarse.volumes().end(), 0.0);
    REQUIRE(std::abs(vol - static_cast<double>(d)) <= 1e-7);

    const StochasticMatrix back = backward_stochastic(fine, v);
    REQUIRE(back.rows() == static_cast<Index>(fine.size()));
    REQUIRE(back.cols() == v.rows());
    for (Index j = 0; j < back.cols(); ++j)
      REQUIRE(std::abs(back.matrix().col(j).sum() - 1.0) <= 1e-10);
  }
}

TEST_CASE("backward propagation needs positive coarse volumes", "[quantum]") {
  const Povm p({identity_matrix(2)});
  RealMatrix v(2, 1);
  v << 1.0, 0.0;
  REQUIRE_THROWS_AS(backward_stochastic(p, StochasticMatrix(v)), ZeroVolumeOutcome);
}

TEST_CASE("POVM mixtures merge by outcome label", "[quantum]") {
  const ComplexMatrix p0 = (ComplexMatrix(2, 2) << 1, 0, 0, 0).finished();
  const ComplexMatrix p1 = (ComplexMatrix(2, 2) << 0, 0, 0, 1).finished();
  const Povm za({p0, p1}, {"0", "1"});
  const Povm zb({p0, p1}, {"x0", "x1"});

  SECTION("disjoint labels keep every scaled element") {
    const Povm mix = mix_povms({za, zb}, {0.25, 0.75});
    REQUIRE(mix.size() == 4);
    REQUIRE(max_abs(mix.element(0) - 0.25 * p0) <= 1e-12);
    REQUIRE(max_abs(mix.element(2) - 0.75 * p0) <= 1e-12);
  }
  SECTION("shared labels accumulate") {
    const Povm mix = mix_povms({za, za}, {0.5, 0.5});
    REQUIRE(mix.size() == 2);
    REQUIRE(max_abs(mix.element(0) - p0) <= 1e-12);
  }
  SECTION("weights must be a distribution") {
    REQUIRE_THROWS_AS(mix_povms({za, zb}, {0.5, 0.4}), WeightError);
    REQUIRE_THROWS_AS(mix_povms({za}, {0.5, 0.5}), WeightError);
  }
}

TEST_CASE("distribution and stochastic validation", "[quantum]") {
  REQUIRE_THROWS_AS(ClassicalDistribution({0.5, 0.6}), InvariantViolation);
  REQUIRE_THROWS_AS(ClassicalDistribution({-0.1, 1.1}), InvariantViolation);
  const ClassicalDistribution n = ClassicalDistribution::normalized({2.0, 2.0});
  REQUIRE(n[0] == Catch::Approx(0.5));

  RealMatrix bad(2, 2);
  bad << 0.5, 0.5, 0.4, 0.5;
  REQUIRE_THROWS_AS(StochasticMatrix(bad), InvariantViolation);
  const StochasticMatrix id = StochasticMatrix::identity(3);
  REQUIRE(id(0, 0) == 1.0);
}
