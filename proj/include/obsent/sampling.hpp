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

#include <cstdint>
#include <numbers>

#include "obsent/quantum.hpp"

namespace obsent {

// SplitMix64 with Box-Muller normals. Sequences depend only on the seed, so
// samples are bit-identical across runs and thread counts.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

  // Uniform on (0, 1].
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Complex cnormal() { return Complex(normal(), normal()); }

private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  Rng r(a ^ (0xd6e8feb86659fd93ull * (b + 0x2545f4914f6cdd1dull)));
  r.next();
  return r.next();
}

struct SamplerConfig {
  std::uint64_t seed = 0;
  Index dim = 2;
  Index outcome_count = 2;
  Index rank = 0;  // 0 means full rank
  Index kraus_count = 1;
  bool projective = false;  // random_povm: rank-1 projectors in a random basis
  bool identity = false;    // random_stochastic: identity matrix
};

namespace detail {

inline ComplexMatrix ginibre(Rng& rng, Index rows, Index cols) {
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.cnormal();
  return g;
}

enum : std::uint64_t {
  salt_pure = 0x70757265,
  salt_mixed = 0x6d697865,
  salt_povm = 0x706f766d,
  salt_instrument = 0x696e7374,
  salt_stochastic = 0x73746f63,
};

}  // namespace detail

// Haar-distributed isometry: QR of a Ginibre matrix with the phase convention
// fixed by the sign of the R diagonal.
inline ComplexMatrix haar_isometry(Rng& rng, Index rows, Index cols) {
  if (rows < cols) throw DimensionMismatch("isometry needs at least as many rows as columns");
  const ComplexMatrix g = detail::ginibre(rng, rows, cols);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR().topRows(cols);
  for (Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline ComplexMatrix haar_unitary(Rng& rng, Index d) { return haar_isometry(rng, d, d); }

inline DensityMatrix random_pure(const SamplerConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, detail::salt_pure));
  ComplexVector v(cfg.dim);
  for (Index i = 0; i < cfg.dim; ++i) v[i] = rng.cnormal();
  return DensityMatrix::pure(v);
}

inline DensityMatrix random_mixed(const SamplerConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, detail::salt_mixed));
  const Index rank = cfg.rank > 0 ? std::min(cfg.rank, cfg.dim) : cfg.dim;
  const ComplexMatrix g = detail::ginibre(rng, cfg.dim, rank);
  const ComplexMatrix m = g * g.adjoint();
  return DensityMatrix(m / m.trace().real());
}

// Gram-normalized Wishart elements: Pi_i = S^{-1/2} G_i G_i^dag S^{-1/2} with
// S their sum. Projective mode instead takes rank-1 projectors onto the
// columns of a Haar unitary.
inline Povm random_povm(const SamplerConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, detail::salt_povm));
  const Index d = cfg.dim;
  if (cfg.projective) {
    const ComplexMatrix u = haar_unitary(rng, d);
    std::vector<ComplexMatrix> elems;
    elems.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i)
      elems.push_back(u.col(i) * u.col(i).adjoint());
    return Povm(std::move(elems));
  }
  const std::size_t k = static_cast<std::size_t>(cfg.outcome_count);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<ComplexMatrix> gram(k);
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (auto& a : gram) {
      const ComplexMatrix g = detail::ginibre(rng, d, d);
      a = g * g.adjoint();
      sum += a;
    }
    const EigenDecomposition es = eig_hermitian(hermitize(sum));
    if (es.eigenvalues.minCoeff() <= tol::support * es.eigenvalues.maxCoeff()) continue;
    RealVector inv_root(d);
    for (Index i = 0; i < d; ++i) inv_root[i] = 1.0 / std::sqrt(es.eigenvalues[i]);
    const ComplexMatrix s_inv_root =
        es.eigenvectors * inv_root.asDiagonal() * es.eigenvectors.adjoint();
    std::vector<ComplexMatrix> elems;
    elems.reserve(k);
    for (const auto& a : gram) elems.push_back(s_inv_root * a * s_inv_root);
    return Povm(std::move(elems));
  }
  throw SingularNormalizer("POVM normalizer stayed singular after 8 attempts");
}

// Partitions a Haar isometry from dim to dim*outcomes*kraus into branch Kraus
// blocks, giving a trace-preserving instrument.
inline Instrument random_instrument(const SamplerConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, detail::salt_instrument));
  const Index d = cfg.dim;
  const Index k = cfg.outcome_count;
  const Index m = std::max<Index>(cfg.kraus_count, 1);
  const ComplexMatrix w = haar_isometry(rng, d * k * m, d);
  std::vector<KrausMap> branches;
  branches.reserve(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(static_cast<std::size_t>(m));
    for (Index t = 0; t < m; ++t) ops.push_back(w.middleRows((i * m + t) * d, d));
    branches.emplace_back(std::move(ops));
  }
  return Instrument(std::move(branches));
}

inline StochasticMatrix random_stochastic(const SamplerConfig& cfg, Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw DimensionMismatch("stochastic matrix needs positive shape");
  if (cfg.identity) {
    if (rows != cols) throw DimensionMismatch("identity mode needs a square shape");
    return StochasticMatrix::identity(rows);
  }
  Rng rng(mix_seed(cfg.seed, detail::salt_stochastic));
  RealMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    double sum = 0.0;
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = -std::log(rng.uniform());
      sum += m(i, j);
    }
    m.col(j) /= sum;
  }
  return StochasticMatrix(std::move(m));
}

}  // namespace obsent
