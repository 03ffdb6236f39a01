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

#include <cmath>
#include <limits>
#include <string>

#include "obsent/quantum.hpp"

namespace obsent {

// Entropy-like scalar in nats. Divergences may be infinite; infinity is a tag,
// never a floating-point Inf flowing through arithmetic.
class EntropyValue {
public:
  static EntropyValue finite(double v) {
    if (!std::isfinite(v)) throw NonFinite("entropy value must be finite");
    return EntropyValue(v, false);
  }
  static EntropyValue infinity() { return EntropyValue(0.0, true); }

  bool is_infinite() const { return infinite_; }

  double value() const {
    if (infinite_) throw DomainError("entropy value is infinite");
    return value_;
  }

  // Collapses the tag for display and comparisons.
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

private:
  EntropyValue(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

inline double natural_log_dim(Index d) { return std::log(static_cast<double>(d)); }

inline EntropyValue von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector& lam = rho.eigenvalues();
  const double cutoff = tol::support * lam.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam[i] > cutoff) s -= lam[i] * std::log(lam[i]);
  return EntropyValue::finite(std::max(s, 0.0));
}

// Umegaki divergence tr[rho ln rho] - tr[rho ln sigma], infinite when rho has
// trace-norm mass outside the support of sigma beyond the leak tolerance.
inline EntropyValue quantum_relative_entropy(const DensityMatrix& rho,
                                             const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("relative entropy of states with different dimensions");
  const HermitianOperator p = support_projector(hermitize(sigma.matrix()));
  const ComplexMatrix off = identity_matrix(rho.dim()) - p.matrix();
  if (trace_norm(off * rho.matrix() * off) > tol::support_leak)
    return EntropyValue::infinity();
  const HermitianOperator log_sigma =
      spectral_fn(hermitize(sigma.matrix()),
                  [](double lam) { return std::log(std::max(lam, 0.0)); }, true);
  const RealVector& lam = rho.eigenvalues();
  const double cutoff = tol::support * lam.cwiseAbs().maxCoeff();
  double tr_rho_log_rho = 0.0;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam[i] > cutoff) tr_rho_log_rho += lam[i] * std::log(lam[i]);
  const double tr_rho_log_sigma = (rho.matrix() * log_sigma.matrix()).trace().real();
  return EntropyValue::finite(tr_rho_log_rho - tr_rho_log_sigma);
}

// Discrete relative entropy over a shared outcome set. Entries at or below the
// probability floor count as zero; positive mass against zero reference is
// infinite.
inline EntropyValue kl_divergence(const ClassicalDistribution& p,
                                  const ClassicalDistribution& q) {
  if (p.labels() != q.labels())
    throw LabelMismatch("relative entropy of distributions over different outcome sets");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= tol::prob_floor) continue;
    if (q[i] <= tol::prob_floor) return EntropyValue::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return EntropyValue::finite(sum);
}

inline EntropyValue observational_entropy_from(const OutcomeStatistics& stats) {
  double s = 0.0;
  for (std::size_t i = 0; i < stats.probabilities.size(); ++i) {
    const double p = stats.probabilities[i];
    if (p <= tol::prob_floor) continue;
    s -= p * std::log(p / stats.volumes[i]);
  }
  return EntropyValue::finite(std::max(s, 0.0));
}

inline EntropyValue observational_entropy(const DensityMatrix& rho, const Povm& c) {
  return observational_entropy_from(outcome_statistics(rho, c));
}

inline EntropyValue observational_entropy(const DensityMatrix& rho, const Instrument& c) {
  return observational_entropy_from(outcome_statistics(rho, c));
}

inline EntropyValue observational_entropy(const DensityMatrix& rho,
                                          const CoarseGrainingSequence& c) {
  return observational_entropy_from(outcome_statistics(rho, c));
}

// Relative entropy of the outcome distributions a measurement assigns to two
// states.
inline EntropyValue observed_relative_entropy(const DensityMatrix& rho,
                                              const DensityMatrix& sigma,
                                              const Instrument& c) {
  const Povm p = povm_of_instrument(c);
  return kl_divergence(outcome_statistics(rho, p).probabilities,
                       outcome_statistics(sigma, p).probabilities);
}

inline EntropyValue observed_relative_entropy(const DensityMatrix& rho,
                                              const DensityMatrix& sigma, const Povm& c) {
  return kl_divergence(outcome_statistics(rho, c).probabilities,
                       outcome_statistics(sigma, c).probabilities);
}

// Root fidelity tr sqrt(sqrt(sigma) rho sqrt(sigma)), symmetric in fact.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("fidelity of states with different dimensions");
  const HermitianOperator root = spectral_fn(
      hermitize(sigma.matrix()), [](double lam) { return std::sqrt(std::max(lam, 0.0)); },
      true);
  const HermitianOperator inner = hermitize(root.matrix() * rho.matrix() * root.matrix());
  const EigenDecomposition e = eig_hermitian(inner);
  double f = 0.0;
  for (Index i = 0; i < e.eigenvalues.size(); ++i)
    if (e.eigenvalues[i] > 0.0) f += std::sqrt(e.eigenvalues[i]);
  return f;
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("trace distance of states with different dimensions");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix());
}

}  // namespace obsent
