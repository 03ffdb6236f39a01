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

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "obsent/quantum.hpp"
#include "obsent/theorems.hpp"

namespace obsent::io {

using nlohmann::json;

inline constexpr const char* schema_tag = "obsent/1";

// Read-only view into a JSON document that tracks its path for diagnostics.
class Cursor {
public:
  Cursor(const json& node, std::string source, std::string path = "")
      : node_(&node), source_(std::move(source)), path_(std::move(path)) {}

  const std::string& source() const { return source_; }
  std::string location() const { return source_ + ":#" + (path_.empty() ? "/" : path_); }
  const json& raw() const { return *node_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(location() + ": " + msg); }

  Cursor at(const std::string& key) const {
    if (!node_->is_object()) fail("expected an object with key '" + key + "'");
    auto it = node_->find(key);
    if (it == node_->end()) fail("missing key '" + key + "'");
    return Cursor(*it, source_, path_ + "/" + key);
  }

  bool has(const std::string& key) const { return node_->is_object() && node_->contains(key); }

  Cursor at(std::size_t i) const {
    if (!node_->is_array()) fail("expected an array");
    if (i >= node_->size()) fail("index " + std::to_string(i) + " out of range");
    return Cursor((*node_)[i], source_, path_ + "/" + std::to_string(i));
  }

  std::size_t array_size() const {
    if (!node_->is_array()) fail("expected an array");
    return node_->size();
  }

  double as_double() const {
    if (!node_->is_number()) fail("expected a number");
    return node_->get<double>();
  }

  std::string as_string() const {
    if (!node_->is_string()) fail("expected a string");
    return node_->get<std::string>();
  }

  Complex as_complex() const {
    if (node_->is_number()) return Complex(node_->get<double>(), 0.0);
    if (node_->is_array() && node_->size() == 2 && (*node_)[0].is_number() &&
        (*node_)[1].is_number())
      return Complex((*node_)[0].get<double>(), (*node_)[1].get<double>());
    fail("expected a complex entry as [re, im] or a plain number");
  }

  // Rethrows construction errors with this cursor's location, preserving the
  // error class so CLI exit codes survive.
  template <class F>
  auto wrap(F&& f) const {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      if (e.error_class() == ErrorClass::Dimension)
        throw DimensionMismatch(location() + ": " + e.what());
      throw InvariantViolation(location() + ": " + e.what());
    }
  }

private:
  const json* node_;
  std::string source_;
  std::string path_;
};

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json real_matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Cursor& c) {
  const std::size_t rows = c.array_size();
  if (rows == 0) c.fail("matrix has no rows");
  const std::size_t cols = c.at(std::size_t{0}).array_size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const Cursor row = c.at(i);
    if (row.array_size() != cols) row.fail("ragged matrix row");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = row.at(j).as_complex();
  }
  return m;
}

inline RealMatrix real_matrix_from_json(const Cursor& c) {
  const std::size_t rows = c.array_size();
  if (rows == 0) c.fail("matrix has no rows");
  const std::size_t cols = c.at(std::size_t{0}).array_size();
  RealMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const Cursor row = c.at(i);
    if (row.array_size() != cols) row.fail("ragged matrix row");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = row.at(j).as_double();
  }
  return m;
}

inline std::vector<std::string> labels_from_json(const Cursor& c) {
  std::vector<std::string> out;
  out.reserve(c.array_size());
  for (std::size_t i = 0; i < c.array_size(); ++i) {
    const Cursor item = c.at(i);
    if (item.raw().is_string())
      out.push_back(item.raw().get<std::string>());
    else if (item.raw().is_number_integer())
      out.push_back(std::to_string(item.raw().get<long long>()));
    else
      item.fail("expected a string or integer label");
  }
  return out;
}

inline std::string kind_of(const Cursor& c) { return c.at("kind").as_string(); }

inline void expect_kind(const Cursor& c, const std::string& kind) {
  const std::string k = kind_of(c);
  if (k != kind) c.at("kind").fail("expected kind '" + kind + "', got '" + k + "'");
}

inline json to_json(const DensityMatrix& rho) {
  return json{{"schema", schema_tag},
              {"kind", "state"},
              {"dim", rho.dim()},
              {"matrix", matrix_to_json(rho.matrix())}};
}

inline json to_json(const Povm& p) {
  json elems = json::array();
  for (const auto& e : p.elements()) elems.push_back(matrix_to_json(e));
  return json{{"schema", schema_tag},
              {"kind", "povm"},
              {"dim", p.dim()},
              {"labels", p.labels()},
              {"elements", std::move(elems)}};
}

inline json to_json(const Instrument& inst) {
  json branches = json::array();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    json kraus = json::array();
    for (const auto& k : inst.branch(i).kraus()) kraus.push_back(matrix_to_json(k));
    branches.push_back(json{{"label", inst.labels()[i]}, {"kraus", std::move(kraus)}});
  }
  return json{{"schema", schema_tag},
              {"kind", "instrument"},
              {"dim", inst.dim()},
              {"branches", std::move(branches)}};
}

inline json to_json(const CoarseGrainingSequence& seq) {
  json steps = json::array();
  for (const auto& s : seq.steps()) steps.push_back(to_json(s));
  return json{{"schema", schema_tag}, {"kind", "sequence"}, {"steps", std::move(steps)}};
}

inline json to_json(const StochasticMatrix& v) {
  return json{{"schema", schema_tag},
              {"kind", "stochastic"},
              {"matrix", real_matrix_to_json(v.matrix())}};
}

inline json to_json(const ClassicalDistribution& d) {
  return json{{"schema", schema_tag},
              {"kind", "distribution"},
              {"labels", d.labels()},
              {"probs", d.probs()}};
}

inline DensityMatrix state_from_json(const Cursor& c) {
  expect_kind(c, "state");
  const ComplexMatrix m = matrix_from_json(c.at("matrix"));
  if (c.has("dim") && c.at("dim").as_double() != static_cast<double>(m.rows()))
    c.at("dim").fail("declared dim does not match the matrix shape");
  return c.wrap([&] { return DensityMatrix(m); });
}

inline Povm povm_from_json(const Cursor& c) {
  expect_kind(c, "povm");
  const Cursor elems = c.at("elements");
  std::vector<ComplexMatrix> mats;
  mats.reserve(elems.array_size());
  for (std::size_t i = 0; i < elems.array_size(); ++i)
    mats.push_back(matrix_from_json(elems.at(i)));
  std::vector<std::string> labels;
  if (c.has("labels")) labels = labels_from_json(c.at("labels"));
  return c.wrap([&] { return Povm(std::move(mats), std::move(labels)); });
}

inline Instrument instrument_from_json(const Cursor& c) {
  expect_kind(c, "instrument");
  const Cursor branches = c.at("branches");
  std::vector<KrausMap> maps;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < branches.array_size(); ++i) {
    const Cursor b = branches.at(i);
    labels.push_back(b.has("label") ? b.at("label").raw().is_string()
                                          ? b.at("label").as_string()
                                          : std::to_string(static_cast<long long>(
                                                b.at("label").as_double()))
                                    : std::to_string(i));
    const Cursor kraus = b.at("kraus");
    std::vector<ComplexMatrix> ops;
    ops.reserve(kraus.array_size());
    for (std::size_t k = 0; k < kraus.array_size(); ++k)
      ops.push_back(matrix_from_json(kraus.at(k)));
    maps.push_back(b.wrap([&] { return KrausMap(std::move(ops)); }));
  }
  return c.wrap([&] { return Instrument(std::move(maps), std::move(labels)); });
}

// Sequence steps may be instrument documents or POVM documents; POVMs are
// promoted to their square-root instruments.
inline CoarseGrainingSequence sequence_from_json(const Cursor& c) {
  expect_kind(c, "sequence");
  const Cursor steps = c.at("steps");
  std::vector<Instrument> insts;
  for (std::size_t i = 0; i < steps.array_size(); ++i) {
    const Cursor s = steps.at(i);
    const std::string k = kind_of(s);
    if (k == "instrument")
      insts.push_back(instrument_from_json(s));
    else if (k == "povm")
      insts.push_back(s.wrap([&] { return Instrument::lueders(povm_from_json(s)); }));
    else
      s.fail("sequence steps must be instruments or POVMs");
  }
  return c.wrap([&] { return CoarseGrainingSequence(std::move(insts)); });
}

inline StochasticMatrix stochastic_from_json(const Cursor& c) {
  expect_kind(c, "stochastic");
  const RealMatrix m = real_matrix_from_json(c.at("matrix"));
  return c.wrap([&] { return StochasticMatrix(m); });
}

// Accepts explicit probabilities or integer counts (normalized on load).
inline ClassicalDistribution distribution_from_json(const Cursor& c, bool* from_counts = nullptr) {
  expect_kind(c, "distribution");
  std::vector<std::string> labels;
  if (c.has("labels")) labels = labels_from_json(c.at("labels"));
  if (from_counts) *from_counts = false;
  if (c.has("counts")) {
    const Cursor counts = c.at("counts");
    std::vector<double> w;
    w.reserve(counts.array_size());
    for (std::size_t i = 0; i < counts.array_size(); ++i) {
      const Cursor item = counts.at(i);
      if (!item.raw().is_number_integer() || item.raw().get<long long>() < 0)
        item.fail("counts must be nonnegative integers");
      w.push_back(static_cast<double>(item.raw().get<long long>()));
    }
    if (from_counts) *from_counts = true;
    return c.wrap([&] { return ClassicalDistribution::normalized(std::move(w), std::move(labels)); });
  }
  const Cursor probs = c.at("probs");
  std::vector<double> p;
  p.reserve(probs.array_size());
  for (std::size_t i = 0; i < probs.array_size(); ++i) p.push_back(probs.at(i).as_double());
  return c.wrap([&] { return ClassicalDistribution(std::move(p), std::move(labels)); });
}

using Measurement = std::variant<Povm, Instrument, CoarseGrainingSequence>;

inline Measurement measurement_from_json(const Cursor& c) {
  const std::string k = kind_of(c);
  if (k == "povm") return povm_from_json(c);
  if (k == "instrument") return instrument_from_json(c);
  if (k == "sequence") return sequence_from_json(c);
  c.fail("expected a povm, instrument, or sequence document");
}

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

inline json entropy_value_to_json(const EntropyValue& v) {
  if (v.is_infinite()) return json("inf");
  return json(v.value());
}

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    default: return "indeterminate";
  }
}

inline const char* kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Identity: return "identity";
    case CheckKind::Inequality: return "inequality";
    default: return "flag";
  }
}

// Joint vectors beyond this size are summarized unless verbose output is on.
inline constexpr std::size_t vector_verbose_cap = 100000;

inline json report_to_json(const VerificationReport& rep, bool verbose = false) {
  json quantities = json::object();
  for (const auto& q : rep.quantities) quantities[q.name] = entropy_value_to_json(q.value);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json jc{{"name", c.name},
            {"kind", kind_name(c.kind)},
            {"lhs", entropy_value_to_json(c.lhs)},
            {"rhs", entropy_value_to_json(c.rhs)},
            {"tolerance", c.tolerance},
            {"status", status_name(c.status)}};
    if (c.residual) jc[c.kind == CheckKind::Inequality ? "slack" : "residual"] = *c.residual;
    checks.push_back(std::move(jc));
  }
  json vectors = json::array();
  for (const auto& v : rep.vectors) {
    if (v.dist.size() > vector_verbose_cap && !verbose) {
      vectors.push_back(json{{"name", v.name}, {"entries", v.dist.size()}, {"summarized", true}});
    } else {
      vectors.push_back(
          json{{"name", v.name}, {"labels", v.dist.labels()}, {"probs", v.dist.probs()}});
    }
  }
  json out{{"theorem", rep.theorem},
           {"quantities", std::move(quantities)},
           {"checks", std::move(checks)},
           {"vectors", std::move(vectors)},
           {"passed", rep.passed()}};
  if (rep.equality_condition_holds)
    out["equality_condition_holds"] = *rep.equality_condition_holds;
  return out;
}

}  // namespace obsent::io
