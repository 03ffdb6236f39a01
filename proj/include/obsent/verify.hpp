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

#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "obsent/sampling.hpp"
#include "obsent/theorems.hpp"

namespace obsent {

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t n = 100;
  Index dim_min = 2;
  Index dim_max = 6;
  unsigned threads = 1;
};

struct InstanceOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::vector<VerificationReport> reports;
  bool passed = true;
  double max_identity_residual = 0.0;
  double min_inequality_slack = std::numeric_limits<double>::infinity();
};

struct SuiteResult {
  std::string suite;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double max_identity_residual = 0.0;
  double min_inequality_slack = std::numeric_limits<double>::infinity();
  std::vector<InstanceOutcome> outcomes;

  std::vector<std::pair<std::size_t, std::uint64_t>> failed() const {
    std::vector<std::pair<std::size_t, std::uint64_t>> out;
    for (const auto& o : outcomes)
      if (!o.passed) out.emplace_back(o.index, o.seed);
    return out;
  }
};

namespace detail {

inline std::optional<double> find_quantity(const VerificationReport& rep,
                                           const std::string& name) {
  for (const auto& q : rep.quantities)
    if (q.name == name && !q.value.is_infinite()) return q.value.value();
  return std::nullopt;
}

// Constructed equality instances must actually land in the equality case:
// the named quantity is zero within tolerance and the condition flag is set.
inline void require_equality_case(VerificationReport& rep, const std::string& gap_name) {
  const std::optional<double> gap = find_quantity(rep, gap_name);
  const bool attained = gap && std::abs(*gap) <= tol::equality &&
                        rep.equality_condition_holds.value_or(true);
  rep.checks.push_back(Check::flag("constructed-equality-attained", attained));
}

inline Povm eigenbasis_projective(const DensityMatrix& rho) {
  std::vector<ComplexMatrix> elems;
  elems.reserve(static_cast<std::size_t>(rho.dim()));
  for (Index i = 0; i < rho.dim(); ++i)
    elems.push_back(rho.eigenvectors().col(i) * rho.eigenvectors().col(i).adjoint());
  return Povm(std::move(elems));
}

inline Instrument trivial_instrument(Index d) {
  return Instrument({KrausMap({identity_matrix(d)})});
}

inline std::vector<double> simplex_weights(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = -std::log(rng.uniform());
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

inline SamplerConfig seeded(std::uint64_t seed, std::uint64_t salt, Index dim) {
  SamplerConfig cfg;
  cfg.seed = mix_seed(seed, salt);
  cfg.dim = dim;
  return cfg;
}

inline std::vector<VerificationReport> thm2_instance(std::uint64_t seed, Index dmin, Index dmax) {
  Rng rng(mix_seed(seed, 1));
  const Index d = dmin + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dmax - dmin + 1)));
  const DensityMatrix rho = random_mixed(seeded(seed, 2, d));
  SamplerConfig pcfg = seeded(seed, 3, d);
  pcfg.outcome_count = 2 + static_cast<Index>(rng.below(4));
  const Povm povm = random_povm(pcfg);

  std::vector<VerificationReport> reports;
  reports.push_back(thm2_report(rho, povm));
  VerificationReport uniform_case = thm2_report(DensityMatrix::maximally_mixed(d), povm);
  require_equality_case(uniform_case, "gap");
  reports.push_back(std::move(uniform_case));
  VerificationReport eigen_case = thm2_report(rho, eigenbasis_projective(rho));
  require_equality_case(eigen_case, "gap");
  reports.push_back(std::move(eigen_case));
  return reports;
}

inline std::vector<VerificationReport> seq_instance(std::uint64_t seed, Index dmin, Index dmax) {
  Rng rng(mix_seed(seed, 11));
  const Index d = dmin + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dmax - dmin + 1)));
  const DensityMatrix rho = random_mixed(seeded(seed, 12, d));
  const auto sample_instrument = [&](std::uint64_t salt) {
    SamplerConfig cfg = seeded(seed, salt, d);
    cfg.outcome_count = 2 + static_cast<Index>(rng.below(2));
    cfg.kraus_count = 1 + static_cast<Index>(rng.below(2));
    return random_instrument(cfg);
  };
  const Instrument inst1 = sample_instrument(13);
  const Instrument inst2 = sample_instrument(14);
  const Instrument inst3 = sample_instrument(15);

  std::vector<VerificationReport> reports;
  reports.push_back(thm_sequential_report(rho, CoarseGrainingSequence({inst1}), inst2));

  SamplerConfig proj_cfg = seeded(seed, 16, d);
  proj_cfg.projective = true;
  const Instrument lueders = Instrument::lueders(random_povm(proj_cfg));
  VerificationReport repeated =
      thm_sequential_report(rho, CoarseGrainingSequence({lueders}), lueders);
  require_equality_case(repeated, "gap");
  reports.push_back(std::move(repeated));

  VerificationReport trivial =
      thm_sequential_report(rho, CoarseGrainingSequence({inst1}), trivial_instrument(d));
  require_equality_case(trivial, "gap");
  reports.push_back(std::move(trivial));

  VerificationReport chain;
  chain.theorem = "monotone-chain";
  const double s_vn = von_neumann_entropy(rho).value();
  const double s1 = observational_entropy(rho, CoarseGrainingSequence({inst1})).value();
  const double s2 = observational_entropy(rho, CoarseGrainingSequence({inst1, inst2})).value();
  const double s3 =
      observational_entropy(rho, CoarseGrainingSequence({inst1, inst2, inst3})).value();
  chain.add_quantity("von_neumann_entropy", s_vn);
  chain.add_quantity("entropy_1_step", s1);
  chain.add_quantity("entropy_2_step", s2);
  chain.add_quantity("entropy_3_step", s3);
  chain.add_quantity("log_dim", natural_log_dim(d));
  chain.checks.push_back(Check::inequality("three-step-above-state-entropy",
                                           EntropyValue::finite(s3), EntropyValue::finite(s_vn),
                                           tol::inequality));
  chain.checks.push_back(Check::inequality("two-step-above-three-step", EntropyValue::finite(s2),
                                           EntropyValue::finite(s3), tol::inequality));
  chain.checks.push_back(Check::inequality("one-step-above-two-step", EntropyValue::finite(s1),
                                           EntropyValue::finite(s2), tol::inequality));
  chain.checks.push_back(Check::inequality("log-dim-above-one-step",
                                           EntropyValue::finite(natural_log_dim(d)),
                                           EntropyValue::finite(s1), tol::inequality));
  reports.push_back(std::move(chain));
  return reports;
}

inline std::vector<VerificationReport> sandwich_instance(std::uint64_t seed, Index dmin,
                                                         Index dmax) {
  Rng rng(mix_seed(seed, 21));
  const Index d = dmin + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dmax - dmin + 1)));
  const DensityMatrix rho = random_mixed(seeded(seed, 22, d));
  const auto sample_instrument = [&](std::uint64_t salt) {
    SamplerConfig cfg = seeded(seed, salt, d);
    cfg.outcome_count = 2 + static_cast<Index>(rng.below(2));
    cfg.kraus_count = 1 + static_cast<Index>(rng.below(2));
    return random_instrument(cfg);
  };
  const Instrument inst1 = sample_instrument(23);
  const Instrument inst2 = sample_instrument(24);

  std::vector<VerificationReport> reports;
  reports.push_back(thm_sandwich_report(rho, CoarseGrainingSequence({inst1}), inst2));

  SamplerConfig proj_cfg = seeded(seed, 25, d);
  proj_cfg.projective = true;
  const Instrument proj = Instrument::lueders(random_povm(proj_cfg));
  VerificationReport complete =
      thm_sandwich_report(rho, CoarseGrainingSequence({proj}), inst2);
  require_equality_case(complete, "mean_relative_entropy");
  reports.push_back(std::move(complete));

  VerificationReport uniform = thm_sandwich_report(DensityMatrix::maximally_mixed(d),
                                                   CoarseGrainingSequence({inst1}), inst2);
  require_equality_case(uniform, "mean_relative_entropy");
  reports.push_back(std::move(uniform));
  return reports;
}

inline std::vector<VerificationReport> refine_instance(std::uint64_t seed, Index dmin,
                                                       Index dmax) {
  Rng rng(mix_seed(seed, 31));
  const Index d = dmin + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dmax - dmin + 1)));
  const DensityMatrix rho = random_mixed(seeded(seed, 32, d));
  SamplerConfig pcfg = seeded(seed, 33, d);
  pcfg.outcome_count = 2 + static_cast<Index>(rng.below(4));
  const Povm povm = random_povm(pcfg);
  const Index rows = 1 + static_cast<Index>(rng.below(povm.size()));
  const StochasticMatrix v =
      random_stochastic(seeded(seed, 34, d), rows, static_cast<Index>(povm.size()));

  std::vector<VerificationReport> reports;
  reports.push_back(thm_refinement_report(rho, povm, v));

  VerificationReport uniform =
      thm_refinement_report(DensityMatrix::maximally_mixed(d), povm, v);
  require_equality_case(uniform, "gap");
  reports.push_back(std::move(uniform));

  VerificationReport ident = thm_refinement_report(
      rho, povm, StochasticMatrix::identity(static_cast<Index>(povm.size())));
  require_equality_case(ident, "gap");
  reports.push_back(std::move(ident));
  return reports;
}

inline std::vector<VerificationReport> concavity_instance(std::uint64_t seed, Index dmin,
                                                          Index dmax) {
  Rng rng(mix_seed(seed, 41));
  const Index d = dmin + static_cast<Index>(rng.below(static_cast<std::uint64_t>(dmax - dmin + 1)));
  SamplerConfig pcfg = seeded(seed, 42, d);
  pcfg.outcome_count = 2 + static_cast<Index>(rng.below(3));
  const Povm povm = random_povm(pcfg);

  std::vector<VerificationReport> reports;
  const std::size_t parts = 2 + rng.below(2);
  std::vector<DensityMatrix> rhos;
  for (std::size_t k = 0; k < parts; ++k)
    rhos.push_back(random_mixed(seeded(seed, 43 + k, d)));
  reports.push_back(thm_concavity_report(rhos, simplex_weights(rng, parts), povm));

  VerificationReport identical =
      thm_concavity_report(std::vector<DensityMatrix>{rhos[0], rhos[0]},
                           std::vector<double>{0.5, 0.5}, povm);
  require_equality_case(identical, "slack");
  reports.push_back(std::move(identical));

  SamplerConfig qcfg = seeded(seed, 47, d);
  qcfg.outcome_count = pcfg.outcome_count;
  const Povm povm_b = random_povm(qcfg);
  reports.push_back(thm_concavity_report(std::vector<Povm>{povm, povm_b},
                                         simplex_weights(rng, 2), rhos[0]));

  std::vector<std::string> disjoint_labels;
  for (std::size_t i = 0; i < povm_b.size(); ++i) disjoint_labels.push_back("b" + std::to_string(i));
  const Povm povm_b_relabeled(povm_b.elements(), disjoint_labels);
  VerificationReport disjoint = thm_concavity_report(
      std::vector<Povm>{povm, povm_b_relabeled}, std::vector<double>{0.5, 0.5}, rhos[0]);
  require_equality_case(disjoint, "slack");
  reports.push_back(std::move(disjoint));
  return reports;
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"thm2", "seq", "sandwich", "refine", "concavity"};
  return names;
}

// Runs one suite of independent instances, optionally across threads, and
// assembles results in index order so aggregates are reproducible.
inline SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  using Runner = std::vector<VerificationReport> (*)(std::uint64_t, Index, Index);
  Runner runner = nullptr;
  std::uint64_t suite_salt = 0;
  if (name == "thm2") {
    runner = detail::thm2_instance;
    suite_salt = 0x746832;
  } else if (name == "seq") {
    runner = detail::seq_instance;
    suite_salt = 0x736571;
  } else if (name == "sandwich") {
    runner = detail::sandwich_instance;
    suite_salt = 0x73616e;
  } else if (name == "refine") {
    runner = detail::refine_instance;
    suite_salt = 0x726566;
  } else if (name == "concavity") {
    runner = detail::concavity_instance;
    suite_salt = 0x636f6e;
  } else {
    throw DomainError("unknown suite '" + name + "'");
  }

  SuiteResult result;
  result.suite = name;
  result.instances = options.n;
  result.outcomes.resize(options.n);
  std::vector<std::exception_ptr> errors(options.n);

  const auto evaluate = [&](std::size_t i) {
    InstanceOutcome& out = result.outcomes[i];
    out.index = i;
    out.seed = mix_seed(mix_seed(options.seed, suite_salt), i);
    try {
      out.reports = runner(out.seed, options.dim_min, options.dim_max);
      for (const auto& rep : out.reports) {
        out.passed = out.passed && rep.passed();
        out.max_identity_residual =
            std::max(out.max_identity_residual, rep.max_identity_residual());
        out.min_inequality_slack =
            std::min(out.min_inequality_slack, rep.min_inequality_slack());
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || options.n < 2) {
    for (std::size_t i = 0; i < options.n; ++i) evaluate(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < options.n; i += threads) evaluate(i);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& o : result.outcomes) {
    if (!o.passed) ++result.failures;
    result.max_identity_residual = std::max(result.max_identity_residual, o.max_identity_residual);
    result.min_inequality_slack = std::min(result.min_inequality_slack, o.min_inequality_slack);
  }
  return result;
}

}  // namespace obsent
