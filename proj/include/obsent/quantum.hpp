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
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "obsent/hermitian.hpp"

namespace obsent {

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

// Unit-trace positive semidefinite operator. Construction hermitizes, clips
// eigenvalues within the PSD tolerance to zero, renormalizes the trace, and
// caches the spectral decomposition of the rebuilt matrix.
class DensityMatrix {
public:
  explicit DensityMatrix(const ComplexMatrix& m) {
    const HermitianOperator h = hermitize(m);
    EigenDecomposition d = eig_hermitian(h);
    if (d.eigenvalues.minCoeff() < -tol::psd)
      throw DomainError("state has eigenvalue " + std::to_string(d.eigenvalues.minCoeff()) +
                        " below the PSD tolerance");
    RealVector lam = d.eigenvalues.cwiseMax(0.0);
    const double tr = lam.sum();
    if (std::abs(tr - 1.0) > tol::trace_renorm)
      throw DomainError("state trace " + std::to_string(tr) + " too far from 1");
    if (tr <= 0.0) throw DomainError("state trace is not positive");
    lam /= tr;
    eig_.eigenvalues = lam;
    eig_.eigenvectors = d.eigenvectors;
    mat_ = d.eigenvectors * lam.asDiagonal() * d.eigenvectors.adjoint();
    mat_ = 0.5 * (mat_ + mat_.adjoint().eval());
  }

  static DensityMatrix maximally_mixed(Index d) {
    return DensityMatrix(identity_matrix(d) / static_cast<double>(d));
  }

  static DensityMatrix pure(const ComplexVector& ket) {
    const double n = ket.norm();
    if (n <= 0.0 || !ket.allFinite()) throw DomainError("pure state vector is not normalizable");
    const ComplexVector v = ket / n;
    return DensityMatrix(v * v.adjoint());
  }

  Index dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }
  const RealVector& eigenvalues() const { return eig_.eigenvalues; }
  const ComplexMatrix& eigenvectors() const { return eig_.eigenvectors; }

private:
  ComplexMatrix mat_;
  EigenDecomposition eig_;
};

// Positive operator-valued measure. Elements are hermitized and checked PSD;
// the element sum must be the identity. Zero elements are dropped and their
// labels recorded.
class Povm {
public:
  Povm(std::vector<ComplexMatrix> elements, std::vector<std::string> labels = {}) {
    if (elements.empty()) throw InvariantViolation("POVM needs at least one element");
    if (labels.empty()) labels = default_labels(elements.size());
    if (labels.size() != elements.size())
      throw DimensionMismatch("POVM has " + std::to_string(elements.size()) + " elements but " +
                              std::to_string(labels.size()) + " labels");
    const Index d = elements.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < elements.size(); ++i) {
      const HermitianOperator h = hermitize(elements[i]);
      if (h.dim() != d) throw DimensionMismatch("POVM elements have mixed dimensions");
      if (max_abs(h.matrix()) <= tol::support) {
        dropped_labels_.push_back(labels[i]);
        continue;
      }
      const EigenDecomposition e = eig_hermitian(h);
      if (e.eigenvalues.minCoeff() < -tol::psd)
        throw DomainError("POVM element " + labels[i] + " has eigenvalue " +
                          std::to_string(e.eigenvalues.minCoeff()));
      sum += h.matrix();
      elements_.push_back(h.matrix());
      labels_.push_back(labels[i]);
      volumes_.push_back(h.trace());
    }
    if (elements_.empty()) throw InvariantViolation("POVM has only zero elements");
    const double defect = max_abs(sum - identity_matrix(d));
    if (defect > tol::povm_sum)
      throw InvariantViolation("POVM element sum deviates from identity by " +
                               std::to_string(defect));
    const double vol = std::accumulate(volumes_.begin(), volumes_.end(), 0.0);
    if (std::abs(vol - static_cast<double>(d)) > tol::volume_sum)
      throw InvariantViolation("POVM volumes sum to " + std::to_string(vol) +
                               ", expected the dimension");
  }

  Index dim() const { return elements_.front().rows(); }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const ComplexMatrix& element(std::size_t i) const { return elements_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& volumes() const { return volumes_; }
  const std::vector<std::string>& dropped_labels() const { return dropped_labels_; }

private:
  std::vector<ComplexMatrix> elements_;
  std::vector<std::string> labels_;
  std::vector<double> volumes_;
  std::vector<std::string> dropped_labels_;
};

// Completely positive map given by Kraus operators, trace non-increasing.
class KrausMap {
public:
  explicit KrausMap(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) throw InvariantViolation("Kraus map needs at least one operator");
    const Index rows = kraus_.front().rows();
    const Index cols = kraus_.front().cols();
    if (rows == 0 || cols == 0) throw NonSquare("Kraus operators must be non-empty");
    for (const auto& k : kraus_) {
      if (k.rows() != rows || k.cols() != cols)
        throw DimensionMismatch("Kraus operators have mixed shapes");
      if (!k.allFinite()) throw NonFinite("Kraus operator has non-finite entries");
    }
    const HermitianOperator effect = hermitize(povm_element());
    const EigenDecomposition e = eig_hermitian(effect);
    if (e.eigenvalues.minCoeff() < -tol::psd ||
        e.eigenvalues.maxCoeff() > 1.0 + tol::trace_preserving)
      throw InvariantViolation("Kraus map is not trace non-increasing");
  }

  Index dim_in() const { return kraus_.front().cols(); }
  Index dim_out() const { return kraus_.front().rows(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_out(), dim_out());
    for (const auto& k : kraus_) out += k * x * k.adjoint();
    return out;
  }

  ComplexMatrix apply_dual(const ComplexMatrix& y) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_in(), dim_in());
    for (const auto& k : kraus_) out += k.adjoint() * y * k;
    return out;
  }

  // Dual at the identity: the effect operator of this branch.
  ComplexMatrix povm_element() const { return apply_dual(identity_matrix(dim_out())); }

  double completeness_defect() const {
    return max_abs(povm_element() - identity_matrix(dim_in()));
  }

private:
  std::vector<ComplexMatrix> kraus_;
};

// Finite collection of CP branch maps on one space summing to a channel.
class Instrument {
public:
  Instrument(std::vector<KrausMap> branches, std::vector<std::string> labels = {})
      : branches_(std::move(branches)) {
    if (branches_.empty()) throw InvariantViolation("instrument needs at least one branch");
    labels_ = labels.empty() ? default_labels(branches_.size()) : std::move(labels);
    if (labels_.size() != branches_.size())
      throw DimensionMismatch("instrument branch and label counts differ");
    const Index d = branches_.front().dim_in();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& b : branches_) {
      if (b.dim_in() != d || b.dim_out() != d)
        throw DimensionMismatch("instrument branches must act on one common space");
      sum += b.povm_element();
    }
    const double defect = max_abs(sum - identity_matrix(d));
    if (defect > tol::trace_preserving)
      throw InvariantViolation("instrument branch effects deviate from identity by " +
                               std::to_string(defect));
  }

  // Square-root promotion of a POVM into an instrument.
  static Instrument lueders(const Povm& p) {
    std::vector<KrausMap> branches;
    branches.reserve(p.size());
    for (const auto& e : p.elements()) {
      const HermitianOperator root = spectral_fn(
          hermitize(e), [](double lam) { return std::sqrt(std::max(lam, 0.0)); }, true);
      branches.emplace_back(std::vector<ComplexMatrix>{root.matrix()});
    }
    return Instrument(std::move(branches), p.labels());
  }

  Index dim() const { return branches_.front().dim_in(); }
  std::size_t size() const { return branches_.size(); }
  const std::vector<KrausMap>& branches() const { return branches_; }
  const KrausMap& branch(std::size_t i) const { return branches_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  ComplexMatrix apply_total(const ComplexMatrix& x) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (const auto& b : branches_) out += b.apply(x);
    return out;
  }

private:
  std::vector<KrausMap> branches_;
  std::vector<std::string> labels_;
};

// Ordered list of instruments applied in sequence on one space.
class CoarseGrainingSequence {
public:
  explicit CoarseGrainingSequence(std::vector<Instrument> steps) : steps_(std::move(steps)) {
    if (steps_.empty()) throw InvariantViolation("sequence needs at least one step");
    const Index d = steps_.front().dim();
    for (const auto& s : steps_)
      if (s.dim() != d) throw DimensionMismatch("sequence steps have mixed dimensions");
  }

  Index dim() const { return steps_.front().dim(); }
  std::size_t length() const { return steps_.size(); }
  const std::vector<Instrument>& steps() const { return steps_; }

private:
  std::vector<Instrument> steps_;
};

// Probability vector over labeled outcomes.
class ClassicalDistribution {
public:
  ClassicalDistribution(std::vector<double> probs, std::vector<std::string> labels = {})
      : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvariantViolation("distribution needs at least one entry");
    labels_ = labels.empty() ? default_labels(probs_.size()) : std::move(labels);
    if (labels_.size() != probs_.size())
      throw DimensionMismatch("distribution entry and label counts differ");
    double sum = 0.0;
    for (auto& p : probs_) {
      if (!std::isfinite(p)) throw NonFinite("distribution has a non-finite entry");
      if (p < -tol::prob_floor)
        throw InvariantViolation("distribution has negative entry " + std::to_string(p));
      if (p < 0.0) p = 0.0;
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol::dist_sum)
      throw InvariantViolation("distribution sums to " + std::to_string(sum));
  }

  static ClassicalDistribution normalized(std::vector<double> weights,
                                          std::vector<std::string> labels = {}) {
    double sum = 0.0;
    for (const double w : weights) {
      if (!std::isfinite(w) || w < -tol::prob_floor)
        throw InvariantViolation("weights must be finite and nonnegative");
      sum += std::max(w, 0.0);
    }
    if (sum <= 0.0) throw InvariantViolation("weights sum to zero");
    for (auto& w : weights) w = std::max(w, 0.0) / sum;
    return ClassicalDistribution(std::move(weights), std::move(labels));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<std::string>& labels() const { return labels_; }

private:
  std::vector<double> probs_;
  std::vector<std::string> labels_;
};

// Column-stochastic matrix: nonnegative entries, each column sums to one.
class StochasticMatrix {
public:
  explicit StochasticMatrix(RealMatrix m) : mat_(std::move(m)) {
    if (mat_.size() == 0) throw InvariantViolation("stochastic matrix is empty");
    if (!mat_.allFinite()) throw NonFinite("stochastic matrix has non-finite entries");
    for (Index j = 0; j < mat_.rows(); ++j)
      for (Index i = 0; i < mat_.cols(); ++i) {
        if (mat_(j, i) < -tol::prob_floor)
          throw InvariantViolation("stochastic matrix has negative entry");
        if (mat_(j, i) < 0.0) mat_(j, i) = 0.0;
      }
    for (Index i = 0; i < mat_.cols(); ++i) {
      const double s = mat_.col(i).sum();
      if (std::abs(s - 1.0) > tol::stochastic_sum)
        throw InvariantViolation("stochastic matrix column " + std::to_string(i) +
                                 " sums to " + std::to_string(s));
    }
  }

  static StochasticMatrix identity(Index n) { return StochasticMatrix(RealMatrix::Identity(n, n)); }

  Index rows() const { return mat_.rows(); }
  Index cols() const { return mat_.cols(); }
  double operator()(Index j, Index i) const { return mat_(j, i); }
  const RealMatrix& matrix() const { return mat_; }

private:
  RealMatrix mat_;
};

inline Povm povm_of_instrument(const Instrument& inst) {
  std::vector<ComplexMatrix> elems;
  elems.reserve(inst.size());
  for (const auto& b : inst.branches()) elems.push_back(b.povm_element());
  return Povm(std::move(elems), inst.labels());
}

// Flattens a sequence into the single instrument whose branches are all
// ordered outcome strings, labeled "(l1,...,ln)".
inline Instrument compose_sequence(const CoarseGrainingSequence& seq,
                                   std::size_t branch_cap = tol::branch_cap) {
  const auto& steps = seq.steps();
  if (steps.size() == 1) return steps.front();
  std::size_t total = 1;
  for (const auto& s : steps) {
    if (total > branch_cap / s.size())
      throw BranchExplosion("composed sequence exceeds the branch cap of " +
                            std::to_string(branch_cap));
    total *= s.size();
  }
  std::vector<KrausMap> branches;
  std::vector<std::string> labels;
  branches.reserve(total);
  labels.reserve(total);
  std::vector<std::size_t> idx(steps.size(), 0);
  while (true) {
    std::vector<ComplexMatrix> ops{identity_matrix(seq.dim())};
    std::string label = "(";
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const KrausMap& br = steps[s].branch(idx[s]);
      std::vector<ComplexMatrix> next;
      next.reserve(ops.size() * br.kraus().size());
      for (const auto& k : br.kraus())
        for (const auto& o : ops) next.push_back(k * o);
      ops = std::move(next);
      if (s) label += ",";
      label += steps[s].labels()[idx[s]];
    }
    label += ")";
    branches.emplace_back(std::move(ops));
    labels.push_back(std::move(label));
    std::size_t s = steps.size();
    while (s > 0 && ++idx[s - 1] == steps[s - 1].size()) idx[--s] = 0;
    if (s == 0) break;
  }
  return Instrument(std::move(branches), std::move(labels));
}

struct OutcomeStatistics {
  ClassicalDistribution probabilities;
  std::vector<double> volumes;
};

inline OutcomeStatistics outcome_statistics(const DensityMatrix& rho, const Povm& c) {
  if (rho.dim() != c.dim())
    throw DimensionMismatch("state dimension " + std::to_string(rho.dim()) +
                            " does not match POVM dimension " + std::to_string(c.dim()));
  std::vector<double> p(c.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    p[i] = std::max((c.element(i) * rho.matrix()).trace().real(), 0.0);
    sum += p[i];
  }
  // POVMs are accepted with a 1e-8 identity defect; probabilities are
  // normalized here so that downstream distributions sum to 1 within 1e-9.
  if (std::abs(sum - 1.0) > tol::trace_renorm || sum <= 0.0)
    throw InvariantViolation("outcome probabilities sum to " + std::to_string(sum));
  for (auto& x : p) x /= sum;
  return OutcomeStatistics{ClassicalDistribution(std::move(p), c.labels()), c.volumes()};
}

inline OutcomeStatistics outcome_statistics(const DensityMatrix& rho, const Instrument& inst) {
  return outcome_statistics(rho, povm_of_instrument(inst));
}

inline OutcomeStatistics outcome_statistics(const DensityMatrix& rho,
                                            const CoarseGrainingSequence& seq) {
  return outcome_statistics(rho, povm_of_instrument(compose_sequence(seq)));
}

struct MeasurementBranch {
  std::string label;
  double probability;
  DensityMatrix state;
};

// Normalized conditional states for branches with probability above the floor.
inline std::vector<MeasurementBranch> post_measurement_states(const DensityMatrix& rho,
                                                              const Instrument& inst) {
  if (rho.dim() != inst.dim())
    throw DimensionMismatch("state and instrument dimensions differ");
  std::vector<MeasurementBranch> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const ComplexMatrix a = inst.branch(i).apply(rho.matrix());
    const double p = a.trace().real();
    if (p <= tol::prob_floor) continue;
    out.push_back(MeasurementBranch{inst.labels()[i], p, DensityMatrix(a / p)});
  }
  return out;
}

// Coarse-grains a POVM through a column-stochastic matrix: each new element is
// the v-weighted sum of old ones.
inline Povm apply_stochastic(const Povm& c, const StochasticMatrix& v,
                             std::vector<std::string> labels = {}) {
  if (static_cast<std::size_t>(v.cols()) != c.size())
    throw DimensionMismatch("stochastic matrix has " + std::to_string(v.cols()) +
                            " columns for a POVM with " + std::to_string(c.size()) +
                            " outcomes");
  std::vector<ComplexMatrix> elems(static_cast<std::size_t>(v.rows()),
                                   ComplexMatrix::Zero(c.dim(), c.dim()));
  for (Index j = 0; j < v.rows(); ++j)
    for (std::size_t i = 0; i < c.size(); ++i)
      elems[static_cast<std::size_t>(j)] += v(j, static_cast<Index>(i)) * c.element(i);
  return Povm(std::move(elems), std::move(labels));
}

// Volume-weighted reversal of a stochastic coarse-graining. Columns of the
// result sum to one; outcomes of the coarse POVM must keep positive volume.
inline StochasticMatrix backward_stochastic(const Povm& c, const StochasticMatrix& v) {
  if (static_cast<std::size_t>(v.cols()) != c.size())
    throw DimensionMismatch("stochastic matrix does not match the POVM outcome count");
  const Index k = static_cast<Index>(c.size());
  RealMatrix back(k, v.rows());
  for (Index j = 0; j < v.rows(); ++j) {
    double vol = 0.0;
    for (Index i = 0; i < k; ++i) vol += v(j, i) * c.volumes()[static_cast<std::size_t>(i)];
    if (vol <= tol::support)
      throw ZeroVolumeOutcome("coarse outcome " + std::to_string(j) + " has zero volume");
    for (Index i = 0; i < k; ++i)
      back(i, j) = v(j, i) * c.volumes()[static_cast<std::size_t>(i)] / vol;
  }
  return StochasticMatrix(std::move(back));
}

// Convex mixture of POVMs over the union of their outcome labels.
inline Povm mix_povms(const std::vector<Povm>& parts, const std::vector<double>& weights) {
  if (parts.empty() || parts.size() != weights.size())
    throw WeightError("mixture needs matching POVM and weight counts");
  double sum = 0.0;
  for (const double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) throw WeightError("mixture weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::dist_sum)
    throw WeightError("mixture weights sum to " + std::to_string(sum));
  const Index d = parts.front().dim();
  std::vector<std::string> labels;
  std::vector<ComplexMatrix> elems;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].dim() != d) throw DimensionMismatch("mixed POVMs have different dimensions");
    for (std::size_t i = 0; i < parts[k].size(); ++i) {
      const auto& lbl = parts[k].labels()[i];
      auto it = std::find(labels.begin(), labels.end(), lbl);
      if (it == labels.end()) {
        labels.push_back(lbl);
        elems.push_back(weights[k] * parts[k].element(i));
      } else {
        elems[static_cast<std::size_t>(it - labels.begin())] += weights[k] * parts[k].element(i);
      }
    }
  }
  return Povm(std::move(elems), std::move(labels));
}

}  // namespace obsent
