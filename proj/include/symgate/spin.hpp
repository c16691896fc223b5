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

#include <string>
#include <vector>

#include "symgate/matrix.hpp"

namespace symgate {

// Site 0 is the leftmost tensor factor, i.e. the most significant bit of
// the basis index.  Z|0> = +|0>.
struct SpinSystem {
  int n_qubits;
  int dim;

  explicit SpinSystem(int n) : n_qubits(n), dim(1 << (n > 0 ? n : 0)) {
    if (n < 1 || n > 10)
      throw ValidationError("E_RANGE", "n_qubits",
                            "expected 1 <= n_qubits <= 10, got " +
                                std::to_string(n));
  }
};

enum class Axis { X, Y, Z };

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    default: return "Z";
  }
}

enum class TermKind { Heisenberg, XY, XXZ, Zeeman, PauliString };

inline const char* term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::Heisenberg: return "heisenberg";
    case TermKind::XY: return "xy";
    case TermKind::XXZ: return "xxz";
    case TermKind::Zeeman: return "zeeman";
    default: return "pauli_string";
  }
}

struct HamiltonianTerm {
  TermKind kind;
  std::vector<int> sites;
  double coupling_j = 0.0;   // J for heisenberg/xy/xxz
  double coupling_jz = 0.0;  // Jz for xxz
  double epsilon = 0.0;      // zeeman
  std::vector<Axis> axes;    // pauli_string, one per site
  double coefficient = 0.0;  // pauli_string
};

inline HamiltonianTerm heisenberg_term(int i, int j, double coupling_j) {
  HamiltonianTerm t;
  t.kind = TermKind::Heisenberg;
  t.sites = {i, j};
  t.coupling_j = coupling_j;
  return t;
}

inline HamiltonianTerm xy_term(int i, int j, double coupling_j) {
  HamiltonianTerm t;
  t.kind = TermKind::XY;
  t.sites = {i, j};
  t.coupling_j = coupling_j;
  return t;
}

inline HamiltonianTerm xxz_term(int i, int j, double coupling_j,
                                double coupling_jz) {
  HamiltonianTerm t;
  t.kind = TermKind::XXZ;
  t.sites = {i, j};
  t.coupling_j = coupling_j;
  t.coupling_jz = coupling_jz;
  return t;
}

inline HamiltonianTerm zeeman_term(int i, int j, double epsilon) {
  HamiltonianTerm t;
  t.kind = TermKind::Zeeman;
  t.sites = {i, j};
  t.epsilon = epsilon;
  return t;
}

inline HamiltonianTerm pauli_string_term(std::vector<int> sites,
                                         std::vector<Axis> axes,
                                         double coefficient) {
  HamiltonianTerm t;
  t.kind = TermKind::PauliString;
  t.sites = std::move(sites);
  t.axes = std::move(axes);
  t.coefficient = coefficient;
  return t;
}

inline void validate_sites(const SpinSystem& sys, const std::vector<int>& sites,
                           const char* field) {
  for (size_t a = 0; a < sites.size(); ++a) {
    if (sites[a] < 0 || sites[a] >= sys.n_qubits)
      throw ValidationError("E_RANGE", field,
                            "site " + std::to_string(sites[a]) +
                                " out of range for n_qubits=" +
                                std::to_string(sys.n_qubits));
    for (size_t b = 0; b < a; ++b)
      if (sites[a] == sites[b])
        throw ValidationError("E_SITES", field,
                              "duplicate site " + std::to_string(sites[a]));
  }
}

inline void validate_term(const SpinSystem& sys, const HamiltonianTerm& term) {
  validate_sites(sys, term.sites, "sites");
  if (term.kind == TermKind::PauliString) {
    if (term.sites.empty())
      throw ValidationError("E_SITES", "sites", "pauli_string needs sites");
    if (term.axes.size() != term.sites.size())
      throw ValidationError("E_SITES", "axes",
                            "pauli_string needs one axis per site");
  } else if (term.sites.size() != 2) {
    throw ValidationError(
        "E_SITES", "sites",
        std::string(term_kind_name(term.kind)) + " needs exactly 2 sites");
  }
}

// sigma_axis on `site`, identity elsewhere.  Built entrywise from the bit at
// position n-1-site of the basis index rather than by repeated kron.
inline SquareMatrix pauli_on_site(const SpinSystem& sys, int site, Axis axis) {
  validate_sites(sys, {site}, "site");
  const int d = sys.dim;
  const int shift = sys.n_qubits - 1 - site;
  SquareMatrix m = SquareMatrix::Zero(d, d);
  for (int b = 0; b < d; ++b) {
    const int bit = (b >> shift) & 1;
    switch (axis) {
      case Axis::X:
        m(b ^ (1 << shift), b) = 1.0;
        break;
      case Axis::Y:
        m(b ^ (1 << shift), b) = bit ? Complex(0, -1) : Complex(0, 1);
        break;
      case Axis::Z:
        m(b, b) = bit ? -1.0 : 1.0;
        break;
    }
  }
  return m;
}

struct ConservedOperator {
  std::string label;  // Sx, Sy, Sz, S_squared, or a custom name
  SquareMatrix matrix;
};

// S_alpha = (1/2) sum_i sigma_alpha^(i)
inline ConservedOperator total_spin_component(const SpinSystem& sys,
                                              Axis axis) {
  SquareMatrix s = SquareMatrix::Zero(sys.dim, sys.dim);
  for (int i = 0; i < sys.n_qubits; ++i) s += pauli_on_site(sys, i, axis);
  std::string label = std::string("S") + (axis == Axis::X   ? "x"
                                          : axis == Axis::Y ? "y"
                                                            : "z");
  return {label, SquareMatrix(0.5 * s)};
}

// Casimir S^2 = Sx^2 + Sy^2 + Sz^2, eigenvalues S(S+1).
inline ConservedOperator total_spin_squared(const SpinSystem& sys) {
  SquareMatrix s2 = SquareMatrix::Zero(sys.dim, sys.dim);
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    SquareMatrix sa = total_spin_component(sys, a).matrix;
    s2 += sa * sa;
  }
  return {"S_squared", s2};
}

inline SquareMatrix materialize(const SpinSystem& sys,
                                const HamiltonianTerm& term) {
  validate_term(sys, term);
  switch (term.kind) {
    case TermKind::Heisenberg:
    case TermKind::XY:
    case TermKind::XXZ: {
      const int i = term.sites[0], j = term.sites[1];
      SquareMatrix xx = pauli_on_site(sys, i, Axis::X) *
                        pauli_on_site(sys, j, Axis::X);
      SquareMatrix yy = pauli_on_site(sys, i, Axis::Y) *
                        pauli_on_site(sys, j, Axis::Y);
      SquareMatrix h = term.coupling_j * (xx + yy);
      if (term.kind != TermKind::XY) {
        SquareMatrix zz = pauli_on_site(sys, i, Axis::Z) *
                          pauli_on_site(sys, j, Axis::Z);
        double wz = term.kind == TermKind::Heisenberg ? term.coupling_j
                                                      : term.coupling_jz;
        h += wz * zz;
      }
      return h;
    }
    case TermKind::Zeeman:
      return term.epsilon * (pauli_on_site(sys, term.sites[0], Axis::Z) -
                             pauli_on_site(sys, term.sites[1], Axis::Z));
    case TermKind::PauliString: {
      SquareMatrix p = SquareMatrix::Identity(sys.dim, sys.dim);
      for (size_t a = 0; a < term.sites.size(); ++a)
        p = p * pauli_on_site(sys, term.sites[a], term.axes[a]);
      return SquareMatrix(term.coefficient * p);
    }
  }
  throw Error("materialize: unknown term kind");
}

// Flips `target` when `control` is |1>.
inline SquareMatrix cnot(const SpinSystem& sys, int control, int target) {
  validate_sites(sys, {control, target}, "sites");
  const int d = sys.dim;
  const int cshift = sys.n_qubits - 1 - control;
  const int tshift = sys.n_qubits - 1 - target;
  SquareMatrix u = SquareMatrix::Zero(d, d);
  for (int b = 0; b < d; ++b) {
    int out = ((b >> cshift) & 1) ? (b ^ (1 << tshift)) : b;
    u(out, b) = 1.0;
  }
  return u;
}

inline SquareMatrix swap_gate(const SpinSystem& sys, int a, int b) {
  validate_sites(sys, {a, b}, "sites");
  const int d = sys.dim;
  const int ashift = sys.n_qubits - 1 - a;
  const int bshift = sys.n_qubits - 1 - b;
  SquareMatrix u = SquareMatrix::Zero(d, d);
  for (int s = 0; s < d; ++s) {
    int abit = (s >> ashift) & 1, bbit = (s >> bshift) & 1;
    int out = s;
    if (abit != bbit) out = s ^ (1 << ashift) ^ (1 << bshift);
    u(out, s) = 1.0;
  }
  return u;
}

}  // namespace symgate
