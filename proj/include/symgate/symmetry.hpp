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

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symgate/matrix.hpp"
#include "symgate/spin.hpp"

namespace symgate {

struct ControlSet {
  SpinSystem sys;
  std::vector<HamiltonianTerm> terms;
  std::vector<SquareMatrix> materialized;
};

inline ControlSet make_control_set(const SpinSystem& sys,
                                   const std::vector<HamiltonianTerm>& terms) {
  if (terms.empty())
    throw ValidationError("E_SCHEMA", "controls", "control set is empty");
  ControlSet cs{sys, terms, {}};
  cs.materialized.reserve(terms.size());
  for (const auto& t : terms) cs.materialized.push_back(materialize(sys, t));
  return cs;
}

struct ConservedReport {
  std::string label;
  bool conserved;
  double max_commutator_norm;
};

inline std::vector<ConservedReport> conserved_check(
    const ControlSet& controls,
    const std::vector<ConservedOperator>& candidates,
    double tol = 1e-12) {
  std::vector<ConservedReport> out;
  out.reserve(candidates.size());
  for (const auto& q : candidates) {
    require_same_shape(q.matrix, controls.materialized.front(),
                       "conserved_check");
    double worst = 0.0;
    for (const auto& h : controls.materialized)
      worst = std::max(worst, commutator(h, q.matrix).norm());
    out.push_back({q.label, worst <= tol, worst});
  }
  return out;
}

// A simultaneous eigenspace of a commuting conserved set.  `eigenvalues`
// holds one entry per conserved operator, in input order.
struct SymmetrySector {
  std::vector<double> eigenvalues;
  Eigen::MatrixXcd isometry;  // dim x k, orthonormal columns
  int dimension;
};

namespace detail {

// Replace each coordinate with its cluster mean: sort, split on gaps > tol.
inline std::vector<double> cluster_values(std::vector<double> v, double tol) {
  std::vector<size_t> order(v.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  size_t start = 0;
  while (start < order.size()) {
    size_t stop = start + 1;
    while (stop < order.size() &&
           v[order[stop]] - v[order[stop - 1]] <= tol)
      ++stop;
    double mean = 0.0;
    for (size_t i = start; i < stop; ++i) mean += v[order[i]];
    mean /= double(stop - start);
    for (size_t i = start; i < stop; ++i) out[order[i]] = mean;
    start = stop;
  }
  return out;
}

}  // namespace detail

// Simultaneous eigenspaces via a random real combination of the conserved
// operators: degenerate spectra of individual operators are generically
// split by the combination, and per-operator eigenvalues are recovered as
// Rayleigh quotients.  Validated by reconstruction; a failed draw (combo
// accidentally degenerate across sectors) is retried with fresh
// coefficients.
inline std::vector<SymmetrySector> sector_decompose(
    const SpinSystem& sys, const std::vector<ConservedOperator>& conserved,
    double tol = 1e-8, std::uint64_t seed = 0) {
  if (conserved.empty())
    throw ValidationError("E_SCHEMA", "conserved", "conserved set is empty");
  const int d = sys.dim;
  for (const auto& q : conserved) {
    if (q.matrix.rows() != d || q.matrix.cols() != d)
      throw DimensionError("sector_decompose: operator '" + q.label +
                           "' has wrong dimension");
    auto hc = hermitian_check(q.matrix, 1e-12);
    if (!hc.is_hermitian)
      throw ValidationError("E_HERMITIAN", q.label,
                            "conserved operator not Hermitian, deviation " +
                                std::to_string(hc.deviation));
  }
  for (size_t a = 0; a < conserved.size(); ++a)
    for (size_t b = a + 1; b < conserved.size(); ++b) {
      double n = commutator(conserved[a].matrix, conserved[b].matrix).norm();
      if (n > tol)
        throw ValidationError("E_SCHEMA", "conserved",
                              "operators '" + conserved[a].label + "' and '" +
                                  conserved[b].label +
                                  "' do not commute, norm " +
                                  std::to_string(n));
    }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(1.0, 2.0);

  for (int attempt = 0; attempt < 4; ++attempt) {
    SquareMatrix combo = SquareMatrix::Zero(d, d);
    for (const auto& q : conserved) combo += coeff(rng) * q.matrix;
    Eigen::SelfAdjointEigenSolver<SquareMatrix> es(combo);
    const Eigen::MatrixXcd& vec = es.eigenvectors();

    // per-operator Rayleigh quotients, clustered coordinatewise
    std::vector<std::vector<double>> coords(conserved.size());
    for (size_t qi = 0; qi < conserved.size(); ++qi) {
      std::vector<double> vals(d);
      for (int c = 0; c < d; ++c) {
        Eigen::VectorXcd col = vec.col(c);
        vals[c] = (col.adjoint() * conserved[qi].matrix * col)(0, 0).real();
      }
      coords[qi] = detail::cluster_values(std::move(vals), tol);
    }

    // group columns by identical representative tuples
    std::vector<int> remaining(d);
    for (int c = 0; c < d; ++c) remaining[c] = c;
    std::vector<SymmetrySector> sectors;
    while (!remaining.empty()) {
      int c0 = remaining.front();
      std::vector<int> members;
      std::vector<int> rest;
      for (int c : remaining) {
        bool same = true;
        for (size_t qi = 0; qi < conserved.size(); ++qi)
          if (coords[qi][c] != coords[qi][c0]) {
            same = false;
            break;
          }
        (same ? members : rest).push_back(c);
      }
      remaining.swap(rest);
      SymmetrySector s;
      for (size_t qi = 0; qi < conserved.size(); ++qi)
        s.eigenvalues.push_back(coords[qi][c0]);
      s.dimension = int(members.size());
      s.isometry.resize(d, s.dimension);
      for (size_t m = 0; m < members.size(); ++m)
        s.isometry.col(Eigen::Index(m)) = vec.col(members[m]);
      sectors.push_back(std::move(s));
    }

    std::sort(sectors.begin(), sectors.end(),
              [](const SymmetrySector& a, const SymmetrySector& b) {
                return a.eigenvalues > b.eigenvalues;
              });

    bool ok = true;
    for (const auto& s : sectors) {
      for (const auto& q : conserved) {
        Eigen::MatrixXcd qv = q.matrix * s.isometry;
        Eigen::MatrixXcd block = s.isometry.adjoint() * qv;
        if ((qv - s.isometry * block).norm() > 1e-8) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return sectors;
  }
  throw Error(
      "sector_decompose: no random combination separated the sectors after "
      "4 attempts; try a different seed or looser tolerance");
}

struct Restriction {
  SquareMatrix matrix;  // V^dag op V
  double leakage;       // ||(I - V V^dag) op V||_F
};

// Never fails on leaky operators; the caller decides what leakage is
// acceptable.
inline Restriction restrict_to(const SquareMatrix& op,
                               const Eigen::MatrixXcd& isometry) {
  if (op.rows() != isometry.rows())
    throw DimensionError("restrict_to: operator dim " +
                         std::to_string(op.rows()) +
                         " vs isometry rows " +
                         std::to_string(isometry.rows()));
  Eigen::MatrixXcd ov = op * isometry;
  SquareMatrix block = isometry.adjoint() * ov;
  double leak = (ov - isometry * block).norm();
  return {std::move(block), leak};
}

inline Restriction restrict_to(const SquareMatrix& op,
                               const SymmetrySector& sector) {
  return restrict_to(op, sector.isometry);
}

struct ObstructionCertificate {
  std::string conserved_label;
  std::vector<double> control_commutator_norms;
  double target_commutator_norm;
  std::string verdict = "unreachable";
};

// First candidate conserved by every control but broken by the target.
// Sound: any product of exponentials of the controls commutes with the
// certificate operator, so it cannot equal a target that does not.
inline std::optional<ObstructionCertificate> obstruction_certificate(
    const ControlSet& controls, const SquareMatrix& target,
    const std::vector<ConservedOperator>& candidates, double tol = 1e-10) {
  require_same_shape(target, controls.materialized.front(),
                     "obstruction_certificate");
  for (const auto& q : candidates) {
    require_same_shape(q.matrix, target, "obstruction_certificate");
    std::vector<double> norms;
    norms.reserve(controls.materialized.size());
    bool all_conserved = true;
    for (const auto& h : controls.materialized) {
      double n = commutator(h, q.matrix).norm();
      norms.push_back(n);
      if (n > tol) all_conserved = false;
    }
    if (!all_conserved) continue;
    double tn = commutator(target, q.matrix).norm();
    if (tn > tol) {
      ObstructionCertificate cert;
      cert.conserved_label = q.label;
      cert.control_commutator_norms = std::move(norms);
      cert.target_commutator_norm = tn;
      return cert;
    }
  }
  return std::nullopt;
}

}  // namespace symgate
