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
#include <optional>
#include <vector>

#include "obsent/entropy.hpp"
#include "obsent/quantum.hpp"

namespace obsent {

// Channel that measures a POVM and writes the outcome into a classical
// register basis: rho -> sum_i tr(Pi_i rho) |i><i|.
inline KrausMap measuring_channel(const Povm& c) {
  const Index d = c.dim();
  const Index k = static_cast<Index>(c.size());
  std::vector<ComplexMatrix> kraus;
  for (Index i = 0; i < k; ++i) {
    const EigenDecomposition e = eig_hermitian(hermitize(c.element(static_cast<std::size_t>(i))));
    const double cutoff = tol::support * e.eigenvalues.cwiseAbs().maxCoeff();
    for (Index m = 0; m < d; ++m) {
      if (e.eigenvalues[m] <= cutoff) continue;
      ComplexMatrix op = ComplexMatrix::Zero(k, d);
      op.row(i) = std::sqrt(e.eigenvalues[m]) * e.eigenvectors.col(m).adjoint();
      kraus.push_back(std::move(op));
    }
  }
  return KrausMap(std::move(kraus));
}

inline KrausMap measuring_channel(const Instrument& c) {
  const Index d = c.dim();
  const Index k = static_cast<Index>(c.size());
  std::vector<ComplexMatrix> kraus;
  for (Index i = 0; i < k; ++i)
    for (const auto& op : c.branch(static_cast<std::size_t>(i)).kraus())
      for (Index row = 0; row < d; ++row) {
        ComplexMatrix e = ComplexMatrix::Zero(k, d);
        e.row(i) = op.row(row);
        kraus.push_back(std::move(e));
      }
  return KrausMap(std::move(kraus));
}

// Transpose channel of a CP map with respect to a reference state:
// x -> sqrt(ref) E^dag[ E(ref)^{-1/2} x E(ref)^{-1/2} ] sqrt(ref).
// A dense superoperator is cached for small dimensions; larger inputs go
// through the Kraus operators directly. Both routes agree.
class PetzMap {
public:
  PetzMap(KrausMap forward, DensityMatrix reference, Index superop_dim_cap = 16)
      : forward_(std::move(forward)), reference_(std::move(reference)) {
    if (forward_.dim_in() != reference_.dim())
      throw DimensionMismatch("Petz reference state does not match the channel input");
    sqrt_ref_ = spectral_fn(hermitize(reference_.matrix()),
                            [](double lam) { return std::sqrt(std::max(lam, 0.0)); }, true)
                    .matrix();
    const HermitianOperator out = hermitize(forward_.apply(reference_.matrix()));
    channel_on_reference_ = out.matrix();
    inv_sqrt_out_ =
        spectral_fn(out, [](double lam) { return 1.0 / std::sqrt(lam); }, true).matrix();
    out_kernel_ = identity_matrix(forward_.dim_out()) - support_projector(out).matrix();
    if (std::max(forward_.dim_in(), forward_.dim_out()) <= superop_dim_cap) build_superop();
  }

  Index dim_in() const { return forward_.dim_out(); }
  Index dim_out() const { return forward_.dim_in(); }
  const ComplexMatrix& channel_on_reference() const { return channel_on_reference_; }
  const DensityMatrix& reference() const { return reference_; }
  bool has_superop() const { return superop_.has_value(); }

  // Rejects inputs with trace-norm mass outside the support of E(ref).
  ComplexMatrix apply(const ComplexMatrix& y) const {
    if (y.rows() != dim_in() || y.cols() != dim_in())
      throw DimensionMismatch("Petz map input has the wrong shape");
    const double leak = trace_norm(out_kernel_ * y * out_kernel_);
    if (leak > tol::support_leak)
      throw SupportLeak("Petz input has trace-norm mass " + std::to_string(leak) +
                        " outside the reference image support");
    if (superop_) {
      const Eigen::Map<const ComplexVector> v(y.data(), y.size());
      ComplexVector out = (*superop_) * v;
      return Eigen::Map<ComplexMatrix>(out.data(), dim_out(), dim_out());
    }
    return apply_kraus(y);
  }

  ComplexMatrix apply_kraus(const ComplexMatrix& y) const {
    const ComplexMatrix mid = inv_sqrt_out_ * y * inv_sqrt_out_;
    return sqrt_ref_ * forward_.apply_dual(mid) * sqrt_ref_;
  }

private:
  void build_superop() {
    const Index k = dim_in();
    const Index d = dim_out();
    Eigen::MatrixXcd s(d * d, k * k);
    ComplexMatrix unit = ComplexMatrix::Zero(k, k);
    for (Index col = 0; col < k * k; ++col) {
      unit(col % k, col / k) = 1.0;
      const ComplexMatrix img = apply_kraus(unit);
      s.col(col) = Eigen::Map<const ComplexVector>(img.data(), img.size());
      unit(col % k, col / k) = 0.0;
    }
    superop_ = std::move(s);
  }

  KrausMap forward_;
  DensityMatrix reference_;
  ComplexMatrix sqrt_ref_;
  ComplexMatrix channel_on_reference_;
  ComplexMatrix inv_sqrt_out_;
  ComplexMatrix out_kernel_;
  std::optional<Eigen::MatrixXcd> superop_;
};

inline HermitianOperator petz_apply(const PetzMap& map, const HermitianOperator& x) {
  return hermitize(map.apply(x.matrix()));
}

// Volume-weighted mixture sum_i (p_i / V_i) Pi_i built from outcome statistics.
inline DensityMatrix recovered_state(const ClassicalDistribution& stats, const Povm& c) {
  if (stats.labels() != c.labels())
    throw LabelMismatch("statistics and POVM outcome sets differ");
  ComplexMatrix acc = ComplexMatrix::Zero(c.dim(), c.dim());
  for (std::size_t i = 0; i < c.size(); ++i)
    acc += (stats[i] / c.volumes()[i]) * c.element(i);
  return DensityMatrix(acc);
}

inline DensityMatrix recovered_state(const DensityMatrix& rho, const Povm& c) {
  return recovered_state(outcome_statistics(rho, c).probabilities, c);
}

// Full Petz route: measure, then pull the outcome distribution back through
// the transpose channel at the maximally mixed reference.
inline DensityMatrix petz_recovered_state(const DensityMatrix& rho, const Povm& c) {
  const KrausMap channel = measuring_channel(c);
  const PetzMap petz(channel, DensityMatrix::maximally_mixed(c.dim()));
  return DensityMatrix(petz.apply(channel.apply(rho.matrix())));
}

inline DensityMatrix petz_recovered_state(const DensityMatrix& rho, const Instrument& c) {
  const KrausMap channel = measuring_channel(c);
  const PetzMap petz(channel, DensityMatrix::maximally_mixed(c.dim()));
  return DensityMatrix(petz.apply(channel.apply(rho.matrix())));
}

// Soft-evidence update: mixes the Bayes posteriors of each outcome with the
// evidence weights. Point-mass evidence reduces to Bayes' rule.
inline ClassicalDistribution jeffrey_retrodict(const ClassicalDistribution& prior,
                                               const StochasticMatrix& likelihood,
                                               const ClassicalDistribution& evidence) {
  if (static_cast<std::size_t>(likelihood.cols()) != prior.size())
    throw DimensionMismatch("likelihood columns must match the prior outcome count");
  if (static_cast<std::size_t>(likelihood.rows()) != evidence.size())
    throw DimensionMismatch("likelihood rows must match the evidence outcome count");
  const std::size_t nx = prior.size();
  const std::size_t ny = evidence.size();
  std::vector<double> pushforward(ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x)
      pushforward[y] += likelihood(static_cast<Index>(y), static_cast<Index>(x)) * prior[x];
  std::vector<double> posterior(nx, 0.0);
  for (std::size_t y = 0; y < ny; ++y) {
    if (evidence[y] <= tol::prob_floor) continue;
    if (pushforward[y] <= tol::prob_floor)
      throw ModelFalsified("evidence weight " + std::to_string(evidence[y]) +
                           " on outcome " + evidence.labels()[y] +
                           " that the prior model gives zero mass");
    for (std::size_t x = 0; x < nx; ++x)
      posterior[x] += prior[x] * likelihood(static_cast<Index>(y), static_cast<Index>(x)) /
                      pushforward[y] * evidence[y];
  }
  return ClassicalDistribution(std::move(posterior), prior.labels());
}

struct CommutingBasis {
  bool commuting;
  ComplexMatrix basis;  // columns, empty when not commuting
};

// Detects a pairwise-commuting POVM and returns a shared eigenbasis found by
// diagonalizing a random linear combination of the elements.
inline CommutingBasis commuting_basis(const Povm& c, std::uint64_t seed = 0x9e3779b97f4a7c15ull) {
  const Index d = c.dim();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const ComplexMatrix comm = c.element(i) * c.element(j) - c.element(j) * c.element(i);
      if (max_abs(comm) > tol::identity) return CommutingBasis{false, ComplexMatrix()};
    }
  std::uint64_t state = seed;
  const auto next_coeff = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return 0.5 + static_cast<double>(z >> 11) * 0x1.0p-53;
  };
  for (int attempt = 0; attempt < 8; ++attempt) {
    ComplexMatrix combo = ComplexMatrix::Zero(d, d);
    for (const auto& e : c.elements()) combo += next_coeff() * e;
    const EigenDecomposition eg = eig_hermitian(hermitize(combo));
    double off = 0.0;
    for (const auto& e : c.elements()) {
      ComplexMatrix rot = eg.eigenvectors.adjoint() * e * eg.eigenvectors;
      rot.diagonal().setZero();
      off = std::max(off, max_abs(rot));
    }
    if (off <= tol::identity) return CommutingBasis{true, eg.eigenvectors};
  }
  throw ConvergenceFailure("failed to resolve a shared eigenbasis for a commuting POVM");
}

}  // namespace obsent
