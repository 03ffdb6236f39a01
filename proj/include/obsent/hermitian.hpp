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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "obsent/errors.hpp"
#include "obsent/tolerances.hpp"

namespace obsent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline ComplexMatrix identity_matrix(Index d) { return ComplexMatrix::Identity(d, d); }

// Hermitian operator with exact symmetry enforced at construction.
class HermitianOperator {
public:
  explicit HermitianOperator(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw NonSquare("hermitian operator must be square and non-empty, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!m.allFinite()) throw NonFinite("hermitian operator has non-finite entries");
    const double asym = max_abs(m - m.adjoint());
    if (asym > tol::herm_input)
      throw NotHermitian("asymmetry " + std::to_string(asym) + " exceeds tolerance");
    mat_ = 0.5 * (m + m.adjoint().eval());
  }

  Index dim() const { return mat_.rows(); }
  const ComplexMatrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }

private:
  ComplexMatrix mat_;
};

inline HermitianOperator hermitize(const ComplexMatrix& m) { return HermitianOperator(m); }

// Eigenvalues descending, eigenvector columns aligned and orthonormal.
struct EigenDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

inline EigenDecomposition eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian eigensolver failed to converge");
  EigenDecomposition d;
  d.eigenvalues = solver.eigenvalues().reverse();
  d.eigenvectors = solver.eigenvectors().rowwise().reverse();
  const Index n = a.dim();
  const double scale = std::max(1.0, max_abs(a.matrix()));
  const double ortho =
      max_abs(d.eigenvectors.adjoint() * d.eigenvectors - identity_matrix(n));
  const ComplexMatrix rebuilt =
      d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.adjoint();
  if (ortho > 1e-10 || max_abs(rebuilt - a.matrix()) > 1e-9 * scale)
    throw ConvergenceFailure("eigendecomposition failed residual checks");
  return d;
}

// Applies f to the spectrum. With support_only, eigenvalues within the relative
// support cutoff of zero map to 0 and f is applied to the rest.
template <class F>
HermitianOperator spectral_fn(const HermitianOperator& a, F&& f, bool support_only = false) {
  const EigenDecomposition d = eig_hermitian(a);
  const double cutoff = tol::support * d.eigenvalues.cwiseAbs().maxCoeff();
  RealVector mapped(d.eigenvalues.size());
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    const double lam = d.eigenvalues[i];
    if (support_only && std::abs(lam) <= cutoff) {
      mapped[i] = 0.0;
      continue;
    }
    const double y = f(lam);
    if (!std::isfinite(y))
      throw DomainError("spectral function undefined at eigenvalue " + std::to_string(lam));
    mapped[i] = y;
  }
  return HermitianOperator(d.eigenvectors * mapped.asDiagonal() * d.eigenvectors.adjoint());
}

// Projector onto the span of eigenvectors with eigenvalue above the relative cutoff.
inline HermitianOperator support_projector(const HermitianOperator& a) {
  const EigenDecomposition d = eig_hermitian(a);
  const double top = d.eigenvalues.size() ? d.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  if (d.eigenvalues.minCoeff() < -std::max(tol::psd, tol::support * top))
    throw DomainError("support projector requires a positive semidefinite input");
  const double cutoff = tol::support * top;
  ComplexMatrix p = ComplexMatrix::Zero(a.dim(), a.dim());
  for (Index i = 0; i < d.eigenvalues.size(); ++i)
    if (d.eigenvalues[i] > cutoff)
      p += d.eigenvectors.col(i) * d.eigenvectors.col(i).adjoint();
  return HermitianOperator(p);
}

// Sum of singular values.
inline double trace_norm(const ComplexMatrix& a) {
  if (!a.allFinite()) throw NonFinite("trace norm of a non-finite matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues().sum();
}

}  // namespace obsent
