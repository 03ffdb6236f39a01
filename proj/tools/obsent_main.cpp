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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "obsent/obsent.hpp"

namespace {

using obsent::io::json;

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_parse = 2;
constexpr int exit_invariant = 3;
constexpr int exit_dimension = 4;

int exit_code_for(const obsent::Error& e) {
  switch (e.error_class()) {
    case obsent::ErrorClass::Parse: return exit_parse;
    case obsent::ErrorClass::Dimension: return exit_dimension;
    default: return exit_invariant;
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OBSENT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw obsent::ParseError("OBSENT_SEED is not an unsigned integer: " + std::string(env));
    }
  }
  return 0;
}

unsigned default_threads() {
  if (const char* env = std::getenv("OBSENT_THREADS")) {
    try {
      return static_cast<unsigned>(std::max(1, std::stoi(env)));
    } catch (...) {
      return 1;
    }
  }
  return 1;
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw obsent::ParseError(out_path + ": cannot open for writing");
  out << doc.dump(2) << "\n";
}

obsent::io::Cursor load(const std::string& path, json& storage) {
  storage = obsent::io::load_file(path);
  return obsent::io::Cursor(storage, path);
}

double display(double nats, bool bits) { return bits ? nats / std::log(2.0) : nats; }

json display_value(const obsent::EntropyValue& v, bool bits) {
  if (v.is_infinite()) return json("inf");
  return json(display(v.value(), bits));
}

void warn_dropped(const obsent::Povm& povm) {
  for (const auto& lbl : povm.dropped_labels())
    std::cerr << "warning: dropped zero POVM element '" << lbl << "'\n";
}

obsent::Povm povm_of_measurement(const obsent::io::Measurement& m) {
  if (std::holds_alternative<obsent::Povm>(m)) return std::get<obsent::Povm>(m);
  if (std::holds_alternative<obsent::Instrument>(m))
    return obsent::povm_of_instrument(std::get<obsent::Instrument>(m));
  return obsent::povm_of_instrument(
      obsent::compose_sequence(std::get<obsent::CoarseGrainingSequence>(m)));
}

int cmd_entropy(const std::string& state_file, const std::string& measurement_file,
                const std::string& out_path, bool bits) {
  json state_doc, meas_doc;
  const obsent::DensityMatrix rho = obsent::io::state_from_json(load(state_file, state_doc));
  const obsent::Povm povm =
      povm_of_measurement(obsent::io::measurement_from_json(load(measurement_file, meas_doc)));
  warn_dropped(povm);

  const obsent::OutcomeStatistics stats = obsent::outcome_statistics(rho, povm);
  const double s_obs = obsent::observational_entropy_from(stats).value();
  const double s_vn = obsent::von_neumann_entropy(rho).value();

  json outcomes = json::array();
  for (std::size_t i = 0; i < stats.probabilities.size(); ++i)
    outcomes.push_back(json{{"label", stats.probabilities.labels()[i]},
                            {"probability", stats.probabilities[i]},
                            {"volume", stats.volumes[i]},
                            {"ratio", stats.probabilities[i] / stats.volumes[i]}});
  emit(json{{"schema", obsent::io::schema_tag},
            {"kind", "entropy_report"},
            {"units", bits ? "bits" : "nats"},
            {"observational_entropy", display(s_obs, bits)},
            {"von_neumann_entropy", display(s_vn, bits)},
            {"gap", display(s_obs - s_vn, bits)},
            {"outcomes", std::move(outcomes)}},
       out_path);
  return exit_ok;
}

int cmd_recover(const std::string& input_file, const std::string& povm_file,
                const std::string& out_path, bool bits) {
  json input_doc, povm_doc;
  const obsent::io::Cursor input = load(input_file, input_doc);
  const obsent::Povm povm = obsent::io::povm_from_json(load(povm_file, povm_doc));
  warn_dropped(povm);

  const std::string kind = obsent::io::kind_of(input);
  json doc;
  if (kind == "state") {
    const obsent::DensityMatrix rho = obsent::io::state_from_json(input);
    const obsent::OutcomeStatistics stats = obsent::outcome_statistics(rho, povm);
    const obsent::DensityMatrix rec = obsent::recovered_state(stats.probabilities, povm);
    const obsent::EntropyValue d_rec = obsent::quantum_relative_entropy(rho, rec);
    const double fid = obsent::fidelity(rho, rec);
    const double half_dist = obsent::trace_distance(rho, rec);
    const double gap = obsent::observational_entropy_from(stats).value() -
                       obsent::von_neumann_entropy(rho).value();
    const bool bound_ok =
        d_rec.is_infinite() ? false : gap >= d_rec.value() - obsent::tol::inequality;
    doc = obsent::io::to_json(rec);
    doc["analysis"] = json{{"units", bits ? "bits" : "nats"},
                           {"relative_entropy_true_vs_recovered", display_value(d_rec, bits)},
                           {"fidelity", fid},
                           {"half_trace_distance", half_dist},
                           {"entropy_gap", display(gap, bits)},
                           {"gap_bounds_relative_entropy", bound_ok}};
  } else if (kind == "distribution") {
    bool from_counts = false;
    const obsent::ClassicalDistribution stats =
        obsent::io::distribution_from_json(input, &from_counts);
    const obsent::DensityMatrix rec = obsent::recovered_state(stats, povm);
    doc = obsent::io::to_json(rec);
    doc["analysis"] = json{{"normalized_from_counts", from_counts}};
  } else {
    input.at("kind").fail("expected a state or distribution document");
  }
  emit(doc, out_path);
  return exit_ok;
}

json suite_to_json(const obsent::SuiteResult& r) {
  json failed = json::array();
  for (const auto& [index, seed] : r.failed())
    failed.push_back(json{{"index", index}, {"seed", seed}});
  json out{{"suite", r.suite},
           {"instances", r.instances},
           {"failures", r.failures},
           {"max_identity_residual", r.max_identity_residual},
           {"failed", std::move(failed)}};
  if (std::isfinite(r.min_inequality_slack))
    out["min_inequality_slack"] = r.min_inequality_slack;
  return out;
}

int cmd_verify(const std::string& suite, const obsent::SuiteOptions& options,
               const std::string& out_path, bool verbose) {
  std::vector<std::string> suites;
  if (suite == "all")
    suites = obsent::suite_names();
  else
    suites.push_back(suite);

  json aggregates = json::array();
  json instances = json::array();
  std::size_t total_failures = 0;
  for (const auto& name : suites) {
    const obsent::SuiteResult result = obsent::run_suite(name, options);
    total_failures += result.failures;
    aggregates.push_back(suite_to_json(result));
    for (const auto& [index, seed] : result.failed())
      std::cerr << "verify failure: suite=" << name << " index=" << index << " seed=" << seed
                << "\n";
    if (!out_path.empty()) {
      for (const auto& o : result.outcomes) {
        json reports = json::array();
        for (const auto& rep : o.reports)
          reports.push_back(obsent::io::report_to_json(rep, verbose));
        instances.push_back(json{{"suite", name},
                                 {"index", o.index},
                                 {"seed", o.seed},
                                 {"passed", o.passed},
                                 {"reports", std::move(reports)}});
      }
    }
  }
  json doc{{"schema", obsent::io::schema_tag},
           {"kind", "verify_report"},
           {"seed", options.seed},
           {"n", options.n},
           {"dims", json::array({options.dim_min, options.dim_max})},
           {"suites", std::move(aggregates)},
           {"total_failures", total_failures}};
  std::cout << doc.dump(2) << "\n";
  if (!out_path.empty()) {
    doc["instances"] = std::move(instances);
    emit(doc, out_path);
  }
  return total_failures == 0 ? exit_ok : exit_verify_failed;
}

int cmd_random(const std::string& kind, const obsent::SamplerConfig& cfg, obsent::Index rows,
               obsent::Index cols, const std::string& out_path, bool pure) {
  json doc;
  if (kind == "state") {
    doc = obsent::io::to_json(pure ? obsent::random_pure(cfg) : obsent::random_mixed(cfg));
  } else if (kind == "povm") {
    doc = obsent::io::to_json(obsent::random_povm(cfg));
  } else if (kind == "instrument") {
    doc = obsent::io::to_json(obsent::random_instrument(cfg));
  } else if (kind == "stochastic") {
    doc = obsent::io::to_json(obsent::random_stochastic(cfg, rows, cols));
  } else {
    throw obsent::ParseError("unknown random kind '" + kind +
                             "' (expected state, povm, instrument, or stochastic)");
  }
  emit(doc, out_path);
  return exit_ok;
}

// Parses "2..6" or a single integer.
void parse_dims(const std::string& text, obsent::SuiteOptions& options) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      options.dim_min = options.dim_max = std::stol(text);
    } else {
      options.dim_min = std::stol(text.substr(0, dots));
      options.dim_max = std::stol(text.substr(dots + 2));
    }
  } catch (...) {
    throw obsent::ParseError("--dims expects N or N..M, got '" + text + "'");
  }
  if (options.dim_min < 1 || options.dim_max < options.dim_min)
    throw obsent::ParseError("--dims range is empty: '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"observational entropy and measurement retrodiction toolkit"};
  app.require_subcommand(1);

  std::string state_file, measurement_file, input_file, povm_file, out_path;
  bool bits = false, verbose = false, pure = false;
  std::uint64_t seed = 0;
  const bool seed_from_env = std::getenv("OBSENT_SEED") != nullptr;

  auto* entropy = app.add_subcommand("entropy", "observational entropy of a state");
  entropy->add_option("state", state_file, "state document")->required();
  entropy->add_option("measurement", measurement_file, "povm/instrument/sequence document")
      ->required();
  entropy->add_option("--out", out_path, "write the report to a file");
  entropy->add_flag("--bits", bits, "display entropies in bits");

  auto* recover = app.add_subcommand("recover", "retrodicted state from statistics");
  recover->add_option("input", input_file, "state or distribution document")->required();
  recover->add_option("povm", povm_file, "povm document")->required();
  recover->add_option("--out", out_path, "write the state document to a file");
  recover->add_flag("--bits", bits, "display entropies in bits");

  obsent::SuiteOptions suite_options;
  std::string suite = "all", dims = "2..6";
  auto* verify = app.add_subcommand("verify", "run randomized theorem verification suites");
  verify->add_option("--suite", suite, "thm2|seq|sandwich|refine|concavity|all")
      ->check(CLI::IsMember({"thm2", "seq", "sandwich", "refine", "concavity", "all"}));
  verify->add_option("--n", suite_options.n, "instances per suite");
  verify->add_option("--dims", dims, "dimension range, e.g. 2..6");
  verify->add_option("--seed", seed, "base seed");
  verify->add_option("--threads", suite_options.threads, "worker threads");
  verify->add_option("--out", out_path, "write per-instance reports to a file");
  verify->add_flag("--verbose", verbose, "keep large joint vectors in reports");

  obsent::SamplerConfig sampler;
  std::string random_kind;
  long long dim = 2, outcomes = 2, kraus = 1, rank = 0, rows = 2, cols = 2;
  auto* random = app.add_subcommand("random", "sample a reproducible random object");
  random->add_option("kind", random_kind, "state|povm|instrument|stochastic")->required();
  random->add_option("--dim", dim, "Hilbert space dimension");
  random->add_option("--outcomes", outcomes, "outcome count");
  random->add_option("--kraus", kraus, "Kraus operators per branch");
  random->add_option("--rank", rank, "state rank (0 = full)");
  random->add_option("--rows", rows, "stochastic rows");
  random->add_option("--cols", cols, "stochastic columns");
  random->add_option("--seed", seed, "sampler seed");
  random->add_flag("--pure", pure, "sample a pure state");
  random->add_flag("--projective", sampler.projective, "projective POVM in a random basis");
  random->add_flag("--identity", sampler.identity, "identity stochastic matrix");
  random->add_option("--out", out_path, "write the document to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_parse;
  }

  try {
    if (!verify->count("--seed") && !random->count("--seed") && seed_from_env)
      seed = default_seed();
    if (entropy->parsed()) return cmd_entropy(state_file, measurement_file, out_path, bits);
    if (recover->parsed()) return cmd_recover(input_file, povm_file, out_path, bits);
    if (verify->parsed()) {
      suite_options.seed = seed;
      if (!verify->count("--threads")) suite_options.threads = default_threads();
      parse_dims(dims, suite_options);
      return cmd_verify(suite, suite_options, out_path, verbose);
    }
    sampler.seed = seed;
    sampler.dim = dim;
    sampler.outcome_count = outcomes;
    sampler.kraus_count = kraus;
    sampler.rank = rank;
    return cmd_random(random_kind, sampler, rows, cols, out_path, pure);
  } catch (const obsent::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invariant;
  }
}
