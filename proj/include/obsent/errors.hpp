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

#include <stdexcept>
#include <string>
#include <utility>

namespace obsent {

// Families map to CLI exit codes: Parse -> 2, Invariant -> 3, Dimension -> 4.
enum class ErrorClass { Parse, Invariant, Dimension };

class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, std::string msg)
      : std::runtime_error(std::move(msg)), cls_(cls) {}

  ErrorClass error_class() const noexcept { return cls_; }

private:
  ErrorClass cls_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorClass::Parse, m) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& m) : Error(ErrorClass::Dimension, m) {}
};

struct LabelMismatch : Error {
  explicit LabelMismatch(const std::string& m) : Error(ErrorClass::Dimension, m) {}
};

struct NonSquare : Error {
  explicit NonSquare(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct NotHermitian : Error {
  explicit NotHermitian(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct NonFinite : Error {
  explicit NonFinite(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct BranchExplosion : Error {
  explicit BranchExplosion(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct ZeroVolumeOutcome : Error {
  explicit ZeroVolumeOutcome(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct WeightError : Error {
  explicit WeightError(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct ModelFalsified : Error {
  explicit ModelFalsified(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct SupportLeak : Error {
  explicit SupportLeak(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

struct SingularNormalizer : Error {
  explicit SingularNormalizer(const std::string& m) : Error(ErrorClass::Invariant, m) {}
};

}  // namespace obsent
