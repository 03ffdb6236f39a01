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

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "obsent/entropy.hpp"
#include "obsent/quantum.hpp"
#include "obsent/recovery.hpp"

namespace obsent {

enum class CheckStatus { Pass, Fail, Indeterminate };

enum class CheckKind { Identity, Inequality, Flag };

// One verified relation. Identities compare |lhs - rhs| against the
// tolerance; inequalities require lhs >= rhs - tolerance and record the slack.
// An infinite lhs satisfies any inequality; identities with an infinite side
// are indeterminate, never silently passed.
struct Check {
  std::string name;
  CheckKind kind;
  EntropyValue lhs;
  EntropyValue rhs;
  double tolerance;
  CheckStatus status;
  std::optional<double> residual;

  static Check identity(std::string name, EntropyValue lhs, EntropyValue rhs, double tol) {
    Check c{std::move(name), CheckKind::Identity, lhs, rhs, tol, CheckStatus::Indeterminate, {}};
    if (!lhs.is_infinite() && !rhs.is_infinite()) {
      const double r = std::abs(lhs.value() - rhs.value());
      c.residual = r;
      c.status = r <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    }
    return c;
  }

  static Check inequality(std::string name, EntropyValue lhs, EntropyValue rhs, double tol) {
    Check c{std::move(name), CheckKind::Inequality, lhs, rhs, tol, CheckStatus::Indeterminate, {}};
    if (lhs.is_infinite()) {
      c.status = CheckStatus::Pass;
    } else if (rhs.is_infinite()) {
      c.status = CheckStatus::Fail;
    } else {
      const double slack = lhs.value() - rhs.value();
      c.residual = slack;
      c.status = slack >= -tol ? CheckStatus::Pass : CheckStatus::Fail;
    }
    return c;
  }

  static Check flag(std::string name, bool ok) {
    return Check{std::move(name),
                 CheckKind::Flag,
                 EntropyValue::finite(ok ? 1.0 : 0.0),
                 EntropyValue::finite(1.0),
                 0.0,
                 ok ? CheckStatus::Pass : CheckStatus::Fail,
                 {}};
  }
};

struct NamedValue {
  std::string name;
  EntropyValue value;
};

struct NamedVector {
  std::string name;
  ClassicalDistribution dist;
};

struct VerificationReport {
  std::string theorem;
  std::vector<NamedValue> quantities;
  std::vector<Check> checks;
  std::vector<NamedVector> vectors;
  std::optional<bool> equality_condition_holds;

  void add_quantity(std::string name, EntropyValue v) {
    quantities.push_back(NamedValue{std::move(name), v});
  }
  void add_quantity(std::string name, double v) {
    quantities.push_back(NamedValue{std::move(name), EntropyValue::finite(v)});
  }

  bool passed() const {
    for (const auto& c : checks)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }

  double max_identity_residual() const {
    double r = 0.0;
    for (const auto& c : checks)
      if (c.kind == CheckKind::Identity && c.residual) r = std::max(r, *c.residual);
    return r;
  }

  double min_inequality_slack() const {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& c : checks)
      if (c.kind == CheckKind::Inequality && c.residual) s = std::min(s, *c.residual);
    return s;
  }
};

namespace detail {

// Builds a distribution from raw joint weights: verifies the weights already
// sum to 1 up to input-acceptance error, then normalizes away the residue.
inline ClassicalDistribution joint_distribution(std::vector<double> w,
                                                std::vector<std::string> labels) {
  double sum = 0.0;
  for (const double x : w) sum += std::max(x, 0.0);
  if (std::abs(sum - 1.0) > tol::trace_renorm)
    throw InvariantViolation("joint outcome vector sums to " + std::to_string(sum));
  return ClassicalDistribution::normalized(std::move(w), std::move(labels));
}

inline EntropyValue neg_two_log(double fid) {
  if (fid <= 0.0) return EntropyValue::infinity();
  return EntropyValue::finite(-2.0 * std::log(fid));
}

}  // namespace detail

// Verifies that observational entropy exceeds the von Neumann entropy by
// exactly the divergence between the eigenbasis-resolved outcome vectors, that
// the gap bounds the divergence from the recovered state, and the fidelity
// consequences of that bound.
inline VerificationReport thm2_report(const DensityMatrix& rho, const Povm& c) {
  VerificationReport rep;
  rep.theorem = "observational-entropy-bound";
  const OutcomeStatistics stats = outcome_statistics(rho, c);
  const double s_obs = observational_entropy_from(stats).value();
  const double s_vn = von_neumann_entropy(rho).value();
  const double gap = s_obs - s_vn;

  const Index d = rho.dim();
  const std::size_t k = c.size();
  std::vector<double> p1(k * static_cast<std::size_t>(d));
  std::vector<double> q1(k * static_cast<std::size_t>(d));
  std::vector<std::string> labels(k * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < k; ++i) {
    const ComplexMatrix rot = rho.eigenvectors().adjoint() * c.element(i) * rho.eigenvectors();
    for (Index j = 0; j < d; ++j) {
      const double r_ij = std::max(rot(j, j).real(), 0.0);
      const std::size_t idx = i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j);
      p1[idx] = rho.eigenvalues()[j] * r_ij;
      q1[idx] = stats.probabilities[i] / stats.volumes[i] * r_ij;
      labels[idx] = "(" + c.labels()[i] + "," + std::to_string(j) + ")";
    }
  }
  const ClassicalDistribution jp = detail::joint_distribution(std::move(p1), labels);
  const ClassicalDistribution jq = detail::joint_distribution(std::move(q1), labels);
  const EntropyValue dkl = kl_divergence(jp, jq);

  const DensityMatrix rec = recovered_state(stats.probabilities, c);
  const EntropyValue d_rec = quantum_relative_entropy(rho, rec);
  const double fid = fidelity(rho, rec);
  const double half_dist = trace_distance(rho, rec);

  rep.add_quantity("observational_entropy", s_obs);
  rep.add_quantity("von_neumann_entropy", s_vn);
  rep.add_quantity("gap", gap);
  rep.add_quantity("joint_divergence", dkl);
  rep.add_quantity("relative_entropy_to_recovered", d_rec);
  rep.add_quantity("fidelity_to_recovered", fid);
  rep.add_quantity("half_trace_distance_to_recovered", half_dist);
  rep.vectors.push_back(NamedVector{"eigenbasis_joint", jp});
  rep.vectors.push_back(NamedVector{"retrodicted_joint", jq});

  rep.checks.push_back(Check::identity("gap-equals-joint-divergence",
                                       EntropyValue::finite(gap), dkl, tol::identity));
  rep.checks.push_back(Check::inequality("gap-bounds-recovery-divergence",
                                         EntropyValue::finite(gap), d_rec, tol::inequality));
  rep.checks.push_back(Check::inequality("recovery-divergence-bounds-fidelity", d_rec,
                                         detail::neg_two_log(fid), tol::inequality));
  const bool gap_zero = gap <= tol::equality;
  const bool state_recovered = 2.0 * half_dist <= tol::state_eq;
  rep.equality_condition_holds = state_recovered;
  rep.checks.push_back(Check::flag("gap-zero-iff-state-recovered", gap_zero == state_recovered));
  rep.checks.push_back(Check::inequality("trace-distance-above-fidelity-gap",
                                         EntropyValue::finite(half_dist),
                                         EntropyValue::finite(1.0 - fid), tol::inequality));
  rep.checks.push_back(
      Check::inequality("trace-distance-below-fidelity-arc",
                        EntropyValue::finite(std::sqrt(std::max(1.0 - fid * fid, 0.0))),
                        EntropyValue::finite(half_dist), tol::inequality));
  return rep;
}

inline VerificationReport thm2_report(const DensityMatrix& rho,
                                      const CoarseGrainingSequence& seq) {
  return thm2_report(rho, povm_of_instrument(compose_sequence(seq)));
}

namespace detail {

struct SequentialData {
  OutcomeStatistics stats_n;
  OutcomeStatistics stats_n1;
  double s_n;
  double s_n1;
  double gap;
  ClassicalDistribution joint_p;
  ClassicalDistribution joint_q;
  bool volumes_consistent;
  double memoryless_deviation;
  Instrument composed_n;
};

// Statistics shared by the sequential-extension reports: entropies of the
// n-step and (n+1)-step coarse-grainings and the joint outcome vectors, where
// the reference vector propagates the n-step marginal by conditional volume.
inline SequentialData sequential_data(const DensityMatrix& rho, const CoarseGrainingSequence& seq,
                                      const Instrument& next) {
  if (rho.dim() != seq.dim() || rho.dim() != next.dim())
    throw DimensionMismatch("state, sequence, and next step dimensions differ");
  Instrument composed_n = compose_sequence(seq);
  std::vector<Instrument> ext = seq.steps();
  ext.push_back(next);
  const Instrument composed_n1 = compose_sequence(CoarseGrainingSequence(std::move(ext)));

  SequentialData out{outcome_statistics(rho, composed_n),
                     outcome_statistics(rho, composed_n1),
                     0.0,
                     0.0,
                     0.0,
                     ClassicalDistribution({1.0}),
                     ClassicalDistribution({1.0}),
                     true,
                     0.0,
                     std::move(composed_n)};
  out.s_n = observational_entropy_from(out.stats_n).value();
  out.s_n1 = observational_entropy_from(out.stats_n1).value();
  out.gap = out.s_n - out.s_n1;

  // Zero-volume outcomes are dropped from the statistics, so (n+1)-step
  // entries are matched to their n-step parents by label rather than index.
  const auto& labels_n1 = out.stats_n1.probabilities.labels();
  std::unordered_map<std::string, std::size_t> child_index;
  for (std::size_t j = 0; j < labels_n1.size(); ++j) child_index.emplace(labels_n1[j], j);

  const bool single_step = seq.steps().size() == 1;
  const auto& labels_n = out.stats_n.probabilities.labels();
  std::vector<double> q(labels_n1.size(), 0.0);
  for (std::size_t a = 0; a < labels_n.size(); ++a) {
    const double pa = out.stats_n.probabilities[a];
    const double va = out.stats_n.volumes[a];
    if (va <= tol::support) {
      if (pa > tol::prob_floor) out.volumes_consistent = false;
      continue;
    }
    const std::string& la = labels_n[a];
    const std::string head = single_step ? "(" + la : la.substr(0, la.size() - 1);
    for (std::size_t b = 0; b < next.size(); ++b) {
      const auto it = child_index.find(head + "," + next.labels()[b] + ")");
      if (it == child_index.end()) continue;
      const std::size_t j = it->second;
      const double cond_volume = out.stats_n1.volumes[j] / va;
      q[j] = cond_volume * pa;
      if (pa > tol::prob_floor)
        out.memoryless_deviation =
            std::max(out.memoryless_deviation,
                     std::abs(out.stats_n1.probabilities[j] / pa - cond_volume));
    }
  }
  out.joint_p = out.stats_n1.probabilities;
  out.joint_q = joint_distribution(std::move(q), labels_n1);
  return out;
}

}  // namespace detail

// Verifies that extending a sequence by one more instrument cannot raise the
// observational entropy, and that the drop equals the divergence between the
// joint statistics and their conditional-volume propagation.
inline VerificationReport thm_sequential_report(const DensityMatrix& rho,
                                                const CoarseGrainingSequence& seq,
                                                const Instrument& next) {
  detail::SequentialData d = detail::sequential_data(rho, seq, next);
  VerificationReport rep;
  rep.theorem = "sequential-coarse-graining";
  const EntropyValue dkl = kl_divergence(d.joint_p, d.joint_q);
  rep.add_quantity("entropy_before", d.s_n);
  rep.add_quantity("entropy_after", d.s_n1);
  rep.add_quantity("gap", d.gap);
  rep.add_quantity("joint_divergence", dkl);
  rep.add_quantity("memoryless_deviation", d.memoryless_deviation);
  rep.vectors.push_back(NamedVector{"joint_statistics", d.joint_p});
  rep.vectors.push_back(NamedVector{"volume_propagated", d.joint_q});

  rep.checks.push_back(Check::inequality("extension-does-not-increase-entropy",
                                         EntropyValue::finite(d.gap), EntropyValue::finite(0.0),
                                         tol::inequality));
  Check ident = Check::identity("gap-equals-joint-divergence", EntropyValue::finite(d.gap), dkl,
                                tol::identity);
  if (!d.volumes_consistent) ident.status = CheckStatus::Indeterminate;
  rep.checks.push_back(ident);
  const bool memoryless = d.memoryless_deviation <= tol::dist_eq;
  rep.equality_condition_holds = memoryless;
  rep.checks.push_back(
      Check::flag("zero-gap-implies-memoryless", !(d.gap <= tol::equality) || memoryless));
  rep.checks.push_back(Check::flag("volumes-consistent", d.volumes_consistent));
  return rep;
}

// Verifies the two-sided bound: the mean relative entropy between true and
// uniform post-measurement states is at least the entropy drop from one more
// coarse-graining, which itself is the joint divergence. Also reports the
// induced lower bound on information lost to the earlier measurements.
inline VerificationReport thm_sandwich_report(const DensityMatrix& rho,
                                              const CoarseGrainingSequence& seq,
                                              const Instrument& next) {
  detail::SequentialData d = detail::sequential_data(rho, seq, next);
  VerificationReport rep;
  rep.theorem = "post-measurement-sandwich";

  const DensityMatrix uniform = DensityMatrix::maximally_mixed(rho.dim());
  const auto& labels_n = d.stats_n.probabilities.labels();
  std::unordered_map<std::string, std::size_t> stat_index;
  for (std::size_t a = 0; a < labels_n.size(); ++a) stat_index.emplace(labels_n[a], a);
  bool mean_infinite = false;
  double mean = 0.0;
  for (std::size_t a = 0; a < d.composed_n.size(); ++a) {
    const auto it = stat_index.find(d.composed_n.labels()[a]);
    if (it == stat_index.end()) continue;
    const double pa = d.stats_n.probabilities[it->second];
    if (pa <= tol::prob_floor) continue;
    const ComplexMatrix post_true = d.composed_n.branch(a).apply(rho.matrix());
    const ComplexMatrix post_unif = d.composed_n.branch(a).apply(uniform.matrix());
    const double tr_true = post_true.trace().real();
    const double tr_unif = post_unif.trace().real();
    if (tr_true <= tol::prob_floor || tr_unif <= tol::prob_floor) continue;
    const EntropyValue branch_d = quantum_relative_entropy(
        DensityMatrix(post_true / tr_true), DensityMatrix(post_unif / tr_unif));
    if (branch_d.is_infinite()) {
      mean_infinite = true;
      break;
    }
    mean += pa * branch_d.value();
  }
  const EntropyValue mean_d =
      mean_infinite ? EntropyValue::infinity() : EntropyValue::finite(mean);
  const EntropyValue dkl = kl_divergence(d.joint_p, d.joint_q);

  rep.add_quantity("entropy_before", d.s_n);
  rep.add_quantity("entropy_after", d.s_n1);
  rep.add_quantity("gap", d.gap);
  rep.add_quantity("mean_relative_entropy", mean_d);
  rep.add_quantity("joint_divergence", dkl);
  const double s_vn = von_neumann_entropy(rho).value();
  if (!mean_infinite)
    rep.add_quantity("lost_information_lower_bound", d.s_n - s_vn - mean);
  rep.vectors.push_back(NamedVector{"joint_statistics", d.joint_p});
  rep.vectors.push_back(NamedVector{"volume_propagated", d.joint_q});

  rep.checks.push_back(Check::inequality("mean-relative-entropy-bounds-gap", mean_d,
                                         EntropyValue::finite(d.gap), tol::inequality));
  Check ident = Check::identity("gap-equals-joint-divergence", EntropyValue::finite(d.gap), dkl,
                                tol::identity);
  if (!d.volumes_consistent) ident.status = CheckStatus::Indeterminate;
  rep.checks.push_back(ident);
  rep.checks.push_back(Check::inequality("joint-divergence-nonnegative", dkl,
                                         EntropyValue::finite(0.0), tol::inequality));
  return rep;
}

// Verifies that coarse-graining a POVM through a stochastic matrix cannot
// lower the observational entropy, with the increase equal to the divergence
// between the fine statistics and their backward-propagated reconstruction.
inline VerificationReport thm_refinement_report(const DensityMatrix& rho, const Povm& c,
                                                const StochasticMatrix& v) {
  VerificationReport rep;
  rep.theorem = "stochastic-refinement";
  const OutcomeStatistics stats = outcome_statistics(rho, c);
  const StochasticMatrix back = backward_stochastic(c, v);
  const Povm coarse = apply_stochastic(c, v);

  const std::size_t k = c.size();
  const std::size_t m = static_cast<std::size_t>(v.rows());
  std::vector<double> p_coarse(m, 0.0);
  std::vector<double> v_coarse(m, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < k; ++i) {
      p_coarse[j] += v(static_cast<Index>(j), static_cast<Index>(i)) * stats.probabilities[i];
      v_coarse[j] += v(static_cast<Index>(j), static_cast<Index>(i)) * stats.volumes[i];
    }
  double s_fine = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    if (stats.probabilities[i] > tol::prob_floor)
      s_fine -= stats.probabilities[i] * std::log(stats.probabilities[i] / stats.volumes[i]);
  double s_coarse = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    if (p_coarse[j] > tol::prob_floor)
      s_coarse -= p_coarse[j] * std::log(p_coarse[j] / v_coarse[j]);
  const double gap = s_coarse - s_fine;

  std::vector<double> p2(k * m), q2(k * m);
  std::vector<std::string> labels(k * m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t idx = i * m + j;
      p2[idx] = v(static_cast<Index>(j), static_cast<Index>(i)) * stats.probabilities[i];
      q2[idx] = back(static_cast<Index>(i), static_cast<Index>(j)) * p_coarse[j];
      labels[idx] = "(" + c.labels()[i] + "," + std::to_string(j) + ")";
    }
  const ClassicalDistribution jp = detail::joint_distribution(std::move(p2), labels);
  const ClassicalDistribution jq = detail::joint_distribution(std::move(q2), labels);
  const EntropyValue joint_dkl = kl_divergence(jp, jq);

  std::vector<double> q_marginal(k, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < m; ++j)
      q_marginal[i] += back(static_cast<Index>(i), static_cast<Index>(j)) * p_coarse[j];
  double marginal_deviation = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    marginal_deviation = std::max(marginal_deviation,
                                  std::abs(stats.probabilities[i] - q_marginal[i]));
  const ClassicalDistribution qm =
      detail::joint_distribution(std::move(q_marginal), c.labels());
  const EntropyValue marginal_dkl = kl_divergence(stats.probabilities, qm);

  double column_defect = 0.0;
  for (Index j = 0; j < back.cols(); ++j)
    column_defect = std::max(column_defect, std::abs(back.matrix().col(j).sum() - 1.0));

  rep.add_quantity("entropy_fine", s_fine);
  rep.add_quantity("entropy_coarse", s_coarse);
  rep.add_quantity("gap", gap);
  rep.add_quantity("joint_divergence", joint_dkl);
  rep.add_quantity("marginal_divergence", marginal_dkl);
  rep.add_quantity("marginal_deviation", marginal_deviation);
  rep.vectors.push_back(NamedVector{"fine_joint", jp});
  rep.vectors.push_back(NamedVector{"backward_joint", jq});

  rep.checks.push_back(Check::identity("gap-equals-joint-divergence", EntropyValue::finite(gap),
                                       joint_dkl, tol::identity));
  rep.checks.push_back(
      Check::inequality("joint-divergence-bounds-marginal", joint_dkl, marginal_dkl,
                        tol::inequality));
  rep.checks.push_back(Check::inequality("marginal-divergence-nonnegative", marginal_dkl,
                                         EntropyValue::finite(0.0), tol::inequality));
  rep.checks.push_back(Check::inequality("coarse-entropy-not-smaller",
                                         EntropyValue::finite(gap), EntropyValue::finite(0.0),
                                         tol::inequality));
  rep.checks.push_back(Check::identity("backward-columns-normalized",
                                       EntropyValue::finite(column_defect),
                                       EntropyValue::finite(0.0), tol::stochastic_sum));
  if (coarse.dropped_labels().empty()) {
    const double s_coarse_povm = observational_entropy(rho, coarse).value();
    rep.checks.push_back(Check::identity("coarse-entropy-povm-route",
                                         EntropyValue::finite(s_coarse_povm),
                                         EntropyValue::finite(s_coarse), tol::identity));
  }
  const bool stationary = marginal_deviation <= tol::dist_eq;
  rep.equality_condition_holds = stationary;
  rep.checks.push_back(
      Check::flag("zero-gap-implies-stationary-marginal", !(gap <= tol::equality) || stationary));
  return rep;
}

// Verifies concavity in the state argument: the entropy of a mixture is at
// least the mixture of entropies, with equality exactly for identical
// outcome statistics.
inline VerificationReport thm_concavity_report(const std::vector<DensityMatrix>& rhos,
                                               const std::vector<double>& weights,
                                               const Povm& c) {
  if (rhos.empty() || rhos.size() != weights.size())
    throw WeightError("state mixture needs matching state and weight counts");
  double wsum = 0.0;
  for (const double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) throw WeightError("mixture weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > tol::dist_sum)
    throw WeightError("mixture weights sum to " + std::to_string(wsum));

  VerificationReport rep;
  rep.theorem = "concavity-states";
  ComplexMatrix mix = ComplexMatrix::Zero(rhos.front().dim(), rhos.front().dim());
  double lhs = 0.0;
  std::vector<ClassicalDistribution> dists;
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (rhos[k].dim() != rhos.front().dim())
      throw DimensionMismatch("mixed states have different dimensions");
    mix += weights[k] * rhos[k].matrix();
    const OutcomeStatistics st = outcome_statistics(rhos[k], c);
    lhs += weights[k] * observational_entropy_from(st).value();
    dists.push_back(st.probabilities);
  }
  const double rhs = observational_entropy(DensityMatrix(mix), c).value();

  double spread = 0.0;
  for (std::size_t a = 0; a < dists.size(); ++a)
    for (std::size_t b = a + 1; b < dists.size(); ++b)
      for (std::size_t i = 0; i < dists[a].size(); ++i)
        spread = std::max(spread, std::abs(dists[a][i] - dists[b][i]));

  rep.add_quantity("mixture_entropy", rhs);
  rep.add_quantity("mixed_entropies", lhs);
  rep.add_quantity("slack", rhs - lhs);
  rep.add_quantity("statistics_spread", spread);
  rep.checks.push_back(Check::inequality("mixture-entropy-not-smaller",
                                         EntropyValue::finite(rhs), EntropyValue::finite(lhs),
                                         tol::inequality));
  const bool same_stats = spread <= tol::dist_eq;
  rep.equality_condition_holds = same_stats;
  rep.checks.push_back(Check::flag("zero-slack-implies-identical-statistics",
                                   !(rhs - lhs <= tol::equality) || same_stats));
  return rep;
}

// Verifies concavity in the POVM argument: measuring the mixture of POVMs
// cannot give less observational entropy than the mixture of entropies, with
// equality exactly when probability-to-volume ratios agree per component.
inline VerificationReport thm_concavity_report(const std::vector<Povm>& povms,
                                               const std::vector<double>& weights,
                                               const DensityMatrix& rho) {
  const Povm mixed = mix_povms(povms, weights);
  VerificationReport rep;
  rep.theorem = "concavity-povms";
  double lhs = 0.0;
  for (std::size_t k = 0; k < povms.size(); ++k)
    lhs += weights[k] * observational_entropy(rho, povms[k]).value();
  const OutcomeStatistics mixed_stats = outcome_statistics(rho, mixed);
  const double rhs = observational_entropy_from(mixed_stats).value();

  double ratio_deviation = 0.0;
  for (std::size_t k = 0; k < povms.size(); ++k) {
    const OutcomeStatistics st = outcome_statistics(rho, povms[k]);
    for (std::size_t i = 0; i < povms[k].size(); ++i) {
      const auto& lbl = povms[k].labels()[i];
      const auto& mixed_labels = mixed.labels();
      const std::size_t pos = static_cast<std::size_t>(
          std::find(mixed_labels.begin(), mixed_labels.end(), lbl) - mixed_labels.begin());
      const double component_ratio = st.probabilities[i] / st.volumes[i];
      const double mixed_ratio = mixed_stats.probabilities[pos] / mixed_stats.volumes[pos];
      ratio_deviation = std::max(ratio_deviation, std::abs(component_ratio - mixed_ratio));
    }
  }

  rep.add_quantity("mixture_entropy", rhs);
  rep.add_quantity("mixed_entropies", lhs);
  rep.add_quantity("slack", rhs - lhs);
  rep.add_quantity("ratio_deviation", ratio_deviation);
  rep.checks.push_back(Check::inequality("mixture-entropy-not-smaller",
                                         EntropyValue::finite(rhs), EntropyValue::finite(lhs),
                                         tol::inequality));
  const bool same_ratio = ratio_deviation <= tol::dist_eq;
  rep.equality_condition_holds = same_ratio;
  rep.checks.push_back(Check::flag("zero-slack-implies-common-ratio",
                                   !(rhs - lhs <= tol::equality) || same_ratio));
  return rep;
}

}  // namespace obsent
