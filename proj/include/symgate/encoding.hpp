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

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "symgate/matrix.hpp"
#include "symgate/spin.hpp"
#include "symgate/symmetry.hpp"

namespace symgate {

// Isometry from 2^k logical dimensions into 2^n physical dimensions.
// `sites` records which physical qubits of an enclosing register this code
// occupies (block placement for compose_codes); defaults to 0..n-1.
struct LogicalCode {
  int n_physical;
  int k_logical;
  Eigen::MatrixXcd isometry;  // 2^n x 2^k
  std::vector<std::string> codeword_labels;
  std::string provenance;  // two_qubit, three_qubit, four_qubit, custom
  std::vector<int> sites;
};

namespace detail {

inline std::vector<int> iota_sites(int n) {
  std::vector<int> s(n);
  std::iota(s.begin(), s.end(), 0);
  return s;
}

// Deterministic basis inside a 2-dim sector: diagonalize the restriction of
// the (0,1) Heisenberg term, ascending eigenvalue, then rotate each column's
// first nonzero amplitude to the positive real axis.  Any fixed gauge works;
// this one is reproducible from the toolkit's own operators and is flagged
// as a convention in reports.
inline Eigen::MatrixXcd gauge_fix(const SpinSystem& sys,
                                  const Eigen::MatrixXcd& isometry) {
  SquareMatrix h01 = materialize(sys, heisenberg_term(0, 1, 1.0));
  SquareMatrix block = restrict_to(h01, isometry).matrix;
  Eigen::SelfAdjointEigenSolver<SquareMatrix> es(
      SquareMatrix(0.5 * (block + block.adjoint())));
  Eigen::MatrixXcd fixed = isometry * es.eigenvectors();
  for (Eigen::Index c = 0; c < fixed.cols(); ++c) {
    for (Eigen::Index r = 0; r < fixed.rows(); ++r) {
      Complex a = fixed(r, c);
      if (std::abs(a) > 1e-8) {
        fixed.col(c) *= std::conj(a) / std::abs(a);
        break;
      }
    }
  }
  return fixed;
}

inline const SymmetrySector& find_sector(
    const std::vector<SymmetrySector>& sectors,
    const std::vector<double>& wanted, double tol) {
  for (const auto& s : sectors) {
    bool hit = true;
    for (size_t i = 0; i < wanted.size(); ++i)
      if (std::abs(s.eigenvalues[i] - wanted[i]) > tol) {
        hit = false;
        break;
      }
    if (hit) return s;
  }
  throw Error("find_sector: requested eigenvalue tuple not present");
}

}  // namespace detail

// |0_L> = |0>_i |1>_j, |1_L> = |1>_i |0>_j; any remaining qubits pinned
// to |0>.
inline LogicalCode code_two_qubit(const SpinSystem& sys, int i, int j) {
  validate_sites(sys, {i, j}, "sites");
  const int d = sys.dim;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d, 2);
  v(1 << (sys.n_qubits - 1 - j), 0) = 1.0;
  v(1 << (sys.n_qubits - 1 - i), 1) = 1.0;
  return {sys.n_qubits, 1,        std::move(v),
          {"0", "1"},   "two_qubit", detail::iota_sites(sys.n_qubits)};
}

// Basis of the (S^2 = 3/4, Sz = +1/2) sector: the two spin-1/2 multiplets
// of three qubits, one state each at Sz = +1/2.
inline LogicalCode code_three_qubit(const SpinSystem& sys) {
  if (sys.n_qubits != 3)
    throw ValidationError("E_RANGE", "n_qubits",
                          "code_three_qubit needs n=3");
  std::vector<ConservedOperator> cons = {total_spin_squared(sys),
                                         total_spin_component(sys, Axis::Z)};
  auto sectors = sector_decompose(sys, cons);
  const auto& sector = detail::find_sector(sectors, {0.75, 0.5}, 1e-6);
  if (sector.dimension != 2)
    throw Error("code_three_qubit: sector dimension " +
                std::to_string(sector.dimension) + ", expected 2");
  Eigen::MatrixXcd v = detail::gauge_fix(sys, sector.isometry);
  return {3, 1, std::move(v), {"0", "1"}, "three_qubit",
          detail::iota_sites(3)};
}

// Basis of the two-dimensional total-singlet (S^2 = 0) space of four
// qubits.
inline LogicalCode code_four_qubit(const SpinSystem& sys) {
  if (sys.n_qubits != 4)
    throw ValidationError("E_RANGE", "n_qubits",
                          "code_four_qubit needs n=4");
  std::vector<ConservedOperator> cons = {total_spin_squared(sys),
                                         total_spin_component(sys, Axis::Z)};
  auto sectors = sector_decompose(sys, cons);
  const auto& sector = detail::find_sector(sectors, {0.0, 0.0}, 1e-6);
  if (sector.dimension != 2)
    throw Error("code_four_qubit: singlet dimension " +
                std::to_string(sector.dimension) + ", expected 2");
  Eigen::MatrixXcd v = detail::gauge_fix(sys, sector.isometry);
  return {4, 1, std::move(v), {"0", "1"}, "four_qubit",
          detail::iota_sites(4)};
}

// Rebase a block code onto the given physical sites of an enclosing
// register.  The isometry is untouched; only placement changes.
inline LogicalCode with_sites(LogicalCode code, std::vector<int> sites) {
  if (int(sites.size()) != code.n_physical)
    throw ValidationError("E_SITES", "sites",
                          "expected " + std::to_string(code.n_physical) +
                              " sites, got " + std::to_string(sites.size()));
  code.sites = std::move(sites);
  return code;
}

// Tensor product of block codes.  Blocks must tile the register exactly:
// implicit |0>-padding changes symmetry sectors, so partial coverage is an
// error, as is overlap.  Logical qubit order follows block list order.
inline LogicalCode compose_codes(const std::vector<LogicalCode>& codes,
                                 const SpinSystem& sys) {
  if (codes.empty())
    throw ValidationError("E_SCHEMA", "codes", "no code blocks given");
  std::vector<int> seen(sys.n_qubits, 0);
  std::vector<int> perm;  // virtual position -> physical site
  int k_total = 0;
  for (const auto& c : codes) {
    if (int(c.sites.size()) != c.n_physical)
      throw ValidationError("E_SITES", "sites", "block sites malformed");
    for (int s : c.sites) {
      if (s < 0 || s >= sys.n_qubits)
        throw ValidationError("E_RANGE", "sites",
                              "site " + std::to_string(s) + " out of range");
      if (seen[s]++)
        throw ValidationError("E_OVERLAP", "sites",
                              "site " + std::to_string(s) +
                                  " claimed by two blocks");
      perm.push_back(s);
    }
    k_total += c.k_logical;
  }
  if (int(perm.size()) != sys.n_qubits)
    throw ValidationError("E_COVERAGE", "sites",
                          "blocks cover " + std::to_string(perm.size()) +
                              " of " + std::to_string(sys.n_qubits) +
                              " qubits");

  Eigen::MatrixXcd k = codes.front().isometry;
  for (size_t i = 1; i < codes.size(); ++i) k = kron(k, codes[i].isometry);

  // rows of k are indexed by virtual bit order (block concatenation);
  // scatter them to physical bit order
  const int n = sys.n_qubits;
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(k.rows(), k.cols());
  for (Eigen::Index bv = 0; bv < k.rows(); ++bv) {
    int b = 0;
    for (int pos = 0; pos < n; ++pos)
      if ((bv >> (n - 1 - pos)) & 1) b |= 1 << (n - 1 - perm[pos]);
    v.row(b) = k.row(bv);
  }

  std::vector<std::string> labels = codes.front().codeword_labels;
  for (size_t i = 1; i < codes.size(); ++i) {
    std::vector<std::string> next;
    for (const auto& a : labels)
      for (const auto& b : codes[i].codeword_labels) next.push_back(a + b);
    labels = std::move(next);
  }

  return {sys.n_qubits, k_total, std::move(v), std::move(labels), "custom",
          detail::iota_sites(sys.n_qubits)};
}

// The logical target an objective compares V^dag U V against.  Validation
// plus pass-through: the target lives in logical space.
inline SquareMatrix encoded_target(const LogicalCode& code,
                                   const SquareMatrix& logical_gate) {
  require_square(logical_gate, "encoded_target");
  if (logical_gate.rows() != (Eigen::Index(1) << code.k_logical))
    throw DimensionError("encoded_target: gate dim " +
                         std::to_string(logical_gate.rows()) +
                         " vs logical dim " +
                         std::to_string(1 << code.k_logical));
  return logical_gate;
}

// V g V^dag: the physical-space image of a logical operator (zero on the
// complement).
inline SquareMatrix embed_logical(const LogicalCode& code,
                                  const SquareMatrix& logical_gate) {
  encoded_target(code, logical_gate);
  return code.isometry * logical_gate * code.isometry.adjoint();
}

struct LeakageReport {
  double leakage_norm;  // ||(I - V V^dag) U V||_F
  std::optional<double> subspace_fidelity;
};

inline LeakageReport leakage(const SquareMatrix& u, const LogicalCode& code,
                             const std::optional<SquareMatrix>& target =
                                 std::nullopt) {
  if (u.rows() != code.isometry.rows())
    throw DimensionError("leakage: unitary dim " + std::to_string(u.rows()) +
                         " vs code physical dim " +
                         std::to_string(code.isometry.rows()));
  Eigen::MatrixXcd uv = u * code.isometry;
  Eigen::MatrixXcd block = code.isometry.adjoint() * uv;
  double leak = (uv - code.isometry * block).norm();
  LeakageReport rep{leak, std::nullopt};
  if (target) {
    const SquareMatrix& t = encoded_target(code, *target);
    rep.subspace_fidelity =
        std::abs((t.adjoint() * block).trace()) / double(block.rows());
  }
  return rep;
}

}  // namespace symgate
