// Copyright 2026 The Symgate Authors
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
#include <Eigen/Eigenvalues>
#include <complex>
#include <optional>
#include <vector>

#include "symgate/errors.hpp"

namespace symgate {

using Complex = std::complex<double>;
using SquareMatrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-10;

inline void require_square(const SquareMatrix& a, const char* who) {
  if (a.rows() != a.cols())
    throw DimensionError(std::string(who) + ": matrix is not square (" +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ")");
}

inline void require_same_shape(const SquareMatrix& a, const SquareMatrix& b,
                               const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(who) + ": shape mismatch (" +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
}

struct HermitianCheck {
  bool is_hermitian;
  double deviation;  // ||A - A^dag||_F
};

inline HermitianCheck hermitian_check(const SquareMatrix& a,
                                      double tol = kDefaultTol) {
  require_square(a, "hermitian_check");
  double dev = (a - a.adjoint()).norm();
  return {dev <= tol, dev};
}

inline SquareMatrix commutator(const SquareMatrix& a, const SquareMatrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

inline double frobenius_distance(const SquareMatrix& a,
                                 const SquareMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return (a - b).norm();
}

// Real Hilbert-Schmidt inner product Re Tr(A^dag B).  Used throughout for
// spans of Hermitian (or skew-Hermitian) operators, which form real vector
// spaces.
inline double hs_inner(const SquareMatrix& a, const SquareMatrix& b) {
  require_same_shape(a, b, "hs_inner");
  return a.conjugate().cwiseProduct(b).sum().real();
}

inline double hs_norm(const SquareMatrix& a) { return a.norm(); }

// Projects `candidate` against an orthonormal `basis` (real coefficients)
// and returns the normalized residual, or nullopt when the residual norm is
// at or below `tol`.  Two projection passes; one pass loses orthogonality
// once the basis grows past a few dozen elements.
inline std::optional<SquareMatrix> hs_orthonormalize(
    const std::vector<SquareMatrix>& basis, const SquareMatrix& candidate,
    double tol = kDefaultTol) {
  SquareMatrix r = candidate;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis) r -= hs_inner(e, r) * e;
  }
  double n = r.norm();
  if (n <= tol) return std::nullopt;
  return SquareMatrix(r / n);
}

// exp(-i t H) for Hermitian H via eigendecomposition.  Rejects inputs whose
// anti-Hermitian part exceeds `tol`; the decomposition runs on the
// symmetrized (H + H^dag)/2 so roundoff in callers cannot leak in.
inline SquareMatrix expm_hermitian(const SquareMatrix& h, double t,
                                   double tol = kDefaultTol) {
  require_square(h, "expm_hermitian");
  auto check = hermitian_check(h, tol);
  if (!check.is_hermitian)
    throw ValidationError("E_HERMITIAN", "matrix",
                          "expm_hermitian: deviation " +
                              std::to_string(check.deviation) +
                              " exceeds tolerance");
  SquareMatrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<SquareMatrix> es(hs);
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXcd phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    phases(i) = std::exp(Complex(0.0, -lam(i) * t));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// Kronecker product with the left factor most significant.  Accepts
// rectangular blocks so isometries compose too.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a,
                             const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double unitarity_deviation(const SquareMatrix& u) {
  require_square(u, "unitarity_deviation");
  return (u.adjoint() * u -
          SquareMatrix::Identity(u.rows(), u.cols())).norm();
}

}  // namespace symgate
