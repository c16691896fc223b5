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
#include <string>
#include <vector>

#include "symgate/matrix.hpp"
#include "symgate/symmetry.hpp"

namespace symgate {

// Orthonormal basis (Hilbert-Schmidt, real coefficients) of the dynamical
// Lie algebra spanned by skew-Hermitian matrices.
struct LieBasis {
  int dim_space;
  std::vector<SquareMatrix> elements;
  bool closed;
  int generation_depth;  // commutator rounds that contributed elements
};

// Smallest real Lie algebra containing {iH} for the given Hermitian
// generators.  Breadth-first: each round commutates the previous round's
// additions against everything before them; closure is declared when a
// round contributes nothing.  d^2 is the hard ceiling, the default
// max_elements adds slack for near-duplicate directions.
inline LieBasis lie_closure(const std::vector<SquareMatrix>& generators,
                            double tol = 1e-8, int max_elements = -1) {
  if (generators.empty())
    throw ValidationError("E_SCHEMA", "generators", "no generators given");
  const Eigen::Index d = generators.front().rows();
  if (max_elements < 0) max_elements = int(d * d) + 8;

  LieBasis out;
  out.dim_space = int(d);
  out.closed = false;
  out.generation_depth = 0;

  for (const auto& g : generators) {
    require_square(g, "lie_closure");
    require_same_shape(g, generators.front(), "lie_closure");
    auto hc = hermitian_check(g, kDefaultTol);
    if (!hc.is_hermitian)
      throw ValidationError("E_HERMITIAN", "generators",
                            "generator not Hermitian, deviation " +
                                std::to_string(hc.deviation));
    SquareMatrix a = Complex(0, 1) * SquareMatrix(0.5 * (g + g.adjoint()));
    if (auto res = hs_orthonormalize(out.elements, a, tol))
      out.elements.push_back(std::move(*res));
  }

  size_t round_start = 0;
  while (true) {
    size_t round_end = out.elements.size();
    if (round_start == round_end) {  // previous round added nothing
      out.closed = true;
      break;
    }
    bool added = false;
    for (size_t i = round_start; i < round_end; ++i) {
      for (size_t j = 0; j < i; ++j) {
        SquareMatrix c = commutator(out.elements[i], out.elements[j]);
        if (auto res = hs_orthonormalize(out.elements, c, tol)) {
          out.elements.push_back(std::move(*res));
          added = true;
          if (int(out.elements.size()) >= max_elements) return out;
        }
      }
    }
    if (added) ++out.generation_depth;
    round_start = round_end;
  }
  return out;
}

enum class Universality { Universal, UniversalUpToPhase, NotUniversal };

inline const char* universality_name(Universality v) {
  switch (v) {
    case Universality::Universal: return "universal";
    case Universality::UniversalUpToPhase: return "universal_up_to_phase";
    default: return "not_universal";
  }
}

struct UniversalityVerdict {
  int closure_dim;
  int full_unitary_dim;   // d^2
  int full_special_dim;   // d^2 - 1
  Universality verdict;
  bool trace_component_present;
  int generation_depth;
  bool closed;
};

struct SpanCheck {
  bool in_span;
  double residual_norm;
};

inline SpanCheck contains_direction(const LieBasis& basis,
                                    const SquareMatrix& candidate,
                                    double tol = 1e-8) {
  if (!basis.elements.empty())
    require_same_shape(candidate, basis.elements.front(),
                       "contains_direction");
  double n = candidate.norm();
  if (n == 0.0) return {true, 0.0};
  SquareMatrix r = candidate / n;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& e : basis.elements) r -= hs_inner(e, r) * e;
  double res = r.norm();
  return {res <= tol, res};
}

namespace detail {

inline UniversalityVerdict classify_closure(const LieBasis& basis) {
  const int d = basis.dim_space;
  SquareMatrix phase = Complex(0, 1) * SquareMatrix::Identity(d, d);
  SpanCheck trace = contains_direction(basis, phase, 1e-6);
  int dim = int(basis.elements.size());
  int traceless = dim - (trace.in_span ? 1 : 0);
  UniversalityVerdict v;
  v.closure_dim = dim;
  v.full_unitary_dim = d * d;
  v.full_special_dim = d * d - 1;
  v.trace_component_present = trace.in_span;
  v.generation_depth = basis.generation_depth;
  v.closed = basis.closed;
  if (dim == d * d)
    v.verdict = Universality::Universal;
  else if (traceless >= d * d - 1)
    v.verdict = Universality::UniversalUpToPhase;
  else
    v.verdict = Universality::NotUniversal;
  return v;
}

}  // namespace detail

// Restrict every control to the sector (rejecting leaky controls), close
// the restricted algebra, classify by dimension.
inline UniversalityVerdict universality_on_sector(const ControlSet& controls,
                                                  const SymmetrySector& sector,
                                                  double tol = 1e-8,
                                                  int max_elements = -1,
                                                  LieBasis* basis_out =
                                                      nullptr) {
  std::vector<SquareMatrix> restricted;
  restricted.reserve(controls.materialized.size());
  for (size_t k = 0; k < controls.materialized.size(); ++k) {
    Restriction r = restrict_to(controls.materialized[k], sector);
    if (r.leakage > tol)
      throw ValidationError("E_LEAKY", "controls[" + std::to_string(k) + "]",
                            "control does not preserve the sector, leakage " +
                                std::to_string(r.leakage));
    restricted.push_back(std::move(r.matrix));
  }
  LieBasis basis = lie_closure(restricted, tol, max_elements);
  UniversalityVerdict v = detail::classify_closure(basis);
  if (basis_out) *basis_out = std::move(basis);
  return v;
}

}  // namespace symgate
