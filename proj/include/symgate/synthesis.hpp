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
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "symgate/encoding.hpp"
#include "symgate/matrix.hpp"
#include "symgate/optim.hpp"
#include "symgate/symmetry.hpp"

namespace symgate {

struct Pulse {
  int control;      // index into the bound ControlSet
  double duration;  // may be negative unless the search forbids it
};

struct PulseSequence {
  std::vector<Pulse> pulses;
};

struct ObjectiveValue {
  double infidelity;  // 1 - |Tr(T^dag V^dag U V)| / 2^k
  double leakage;     // ||(I - V V^dag) U V||_F
  double value;       // infidelity + weight * leakage^2
};

struct SynthesisOptions {
  int length = 8;
  int restarts = 16;
  int max_iters = 500;
  double leakage_weight = 10.0;
  std::uint64_t seed = 0;
  double tol_stop = 1e-10;
  std::vector<int> pattern;    // cycled; empty = round-robin over controls
  bool allow_negative = true;  // false squares the search variables
};

struct SynthesisReport {
  double best_infidelity;
  double leakage_norm;
  double objective_value;
  int iterations;
  int restarts_used;
  PulseSequence sequence;
  // durations folded into [0, period) of the code-restricted generator,
  // where a period exists; cosmetic, raw durations stay authoritative
  std::vector<std::optional<double>> durations_mod_period;
  double symmetry_audit;  // max over prefixes and conserved ops
};

// Pulse 0 acts first: U = U_{L-1} ... U_1 U_0.
inline SquareMatrix apply_sequence(const ControlSet& controls,
                                   const PulseSequence& seq) {
  const int d = controls.sys.dim;
  SquareMatrix u = SquareMatrix::Identity(d, d);
  for (const auto& p : seq.pulses) {
    if (p.control < 0 || p.control >= int(controls.materialized.size()))
      throw ValidationError("E_RANGE", "pulses",
                            "control index " + std::to_string(p.control) +
                                " out of range");
    u = expm_hermitian(controls.materialized[p.control], p.duration) * u;
  }
  return u;
}

inline ObjectiveValue objective(const ControlSet& controls,
                                const LogicalCode& code,
                                const SquareMatrix& target,
                                const PulseSequence& seq,
                                double leakage_weight = 10.0) {
  const SquareMatrix& t = encoded_target(code, target);
  SquareMatrix u = apply_sequence(controls, seq);
  Eigen::MatrixXcd uv = u * code.isometry;
  SquareMatrix block = code.isometry.adjoint() * uv;
  double leak = (uv - code.isometry * block).norm();
  double infid =
      1.0 - std::abs((t.adjoint() * block).trace()) / double(t.rows());
  return {infid, leak, infid + leakage_weight * leak * leak};
}

// Least duration T with exp(-i T H) proportional to the identity: 2*pi over
// the float-gcd of the eigenvalue gaps.  nullopt when the spectrum is flat
// (pure phase) or the gaps are incommensurate at the snap tolerance.
inline std::optional<double> duration_period(const SquareMatrix& h,
                                             double tol = 1e-9) {
  require_square(h, "duration_period");
  Eigen::SelfAdjointEigenSolver<SquareMatrix> es(
      SquareMatrix(0.5 * (h + h.adjoint())));
  const Eigen::VectorXd& lam = es.eigenvalues();
  double g = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) {
      double gap = std::abs(lam(i) - lam(j));
      if (gap <= tol) continue;
      double a = std::max(g, gap), b = std::min(g, gap);
      if (b <= tol) {
        g = a;
        continue;
      }
      while (b > tol) {
        double r = std::fmod(a, b);
        if (r < tol || b - r < tol) r = 0.0;
        a = b;
        b = r;
      }
      g = a;
    }
  if (g <= 1e-6) return std::nullopt;
  return 2.0 * M_PI / g;
}

namespace detail {

// Eigendecompositions of the control Hamiltonians, shared across the many
// propagator evaluations of a synthesis run.  Decomposes the same
// symmetrized matrix expm_hermitian would, so cached propagators are
// bit-identical to the from-scratch path.
struct ControlCache {
  std::vector<SquareMatrix> h;
  std::vector<Eigen::MatrixXcd> q;
  std::vector<Eigen::VectorXd> lam;

  explicit ControlCache(const ControlSet& controls) {
    for (const auto& hk : controls.materialized) {
      Eigen::SelfAdjointEigenSolver<SquareMatrix> es(
          SquareMatrix(0.5 * (hk + hk.adjoint())));
      h.push_back(hk);
      q.push_back(es.eigenvectors());
      lam.push_back(es.eigenvalues());
    }
  }

  SquareMatrix propagator(int c, double t) const {
    Eigen::VectorXcd ph(lam[c].size());
    for (Eigen::Index i = 0; i < lam[c].size(); ++i)
      ph(i) = std::exp(Complex(0.0, -lam[c](i) * t));
    return q[c] * ph.asDiagonal() * q[c].adjoint();
  }
};

// Objective and analytic duration-gradient in one pass.  Forward sweep
// accumulates W_k = U_k ... U_0 V; the backward sweep carries
// Q_k = V^dag U_{L-1} ... U_{k+1} for the trace term and
// S_k = (U_{L-1} ... U_{k+1})^dag (I - VV^dag) U V for the leakage term,
// so each pulse costs two small matrix products.
inline ObjectiveValue objective_grad(const ControlCache& cache,
                                     const Eigen::MatrixXcd& v,
                                     const SquareMatrix& t,
                                     const std::vector<int>& pulse_controls,
                                     const Eigen::VectorXd& theta,
                                     double leakage_weight,
                                     Eigen::VectorXd* grad) {
  const int len = int(theta.size());
  const double m = double(t.rows());
  std::vector<Eigen::MatrixXcd> u(len), w(len + 1);
  w[0] = v;
  for (int k = 0; k < len; ++k) {
    u[k] = cache.propagator(pulse_controls[k], theta(k));
    w[k + 1] = u[k] * w[k];
  }
  SquareMatrix block = v.adjoint() * w[len];
  Complex z = (t.adjoint() * block).trace();
  Eigen::MatrixXcd y = w[len] - v * block;
  double leak = y.norm();
  double infid = 1.0 - std::abs(z) / m;
  double value = infid + leakage_weight * leak * leak;

  if (grad) {
    grad->resize(len);
    Eigen::MatrixXcd qk = v.adjoint();  // Q_{L-1}
    Eigen::MatrixXcd s = y;             // S_{L-1}
    const double az = std::abs(z);
    for (int k = len - 1; k >= 0; --k) {
      Eigen::MatrixXcd hw = cache.h[pulse_controls[k]] * w[k + 1];
      Complex zp = Complex(0, -1) * (t.adjoint() * (qk * hw)).trace();
      double lp = 2.0 * (s.adjoint() * hw).trace().imag();
      double df = az > 1e-300 ? -(std::conj(z) * zp).real() / (m * az) : 0.0;
      (*grad)(k) = df + leakage_weight * lp;
      if (k > 0) {
        qk = qk * u[k];
        s = u[k].adjoint() * s;
      }
    }
  }
  return {infid, leak, value};
}

}  // namespace detail

// Recompute a sequence's numbers from scratch and audit every prefix
// product against the given conserved operators.
inline SynthesisReport verify_sequence(
    const ControlSet& controls, const LogicalCode& code,
    const SquareMatrix& target, const PulseSequence& seq,
    const std::vector<ConservedOperator>& conserved = {},
    double leakage_weight = 10.0) {
  ObjectiveValue obj = objective(controls, code, target, seq, leakage_weight);

  double audit = 0.0;
  const int d = controls.sys.dim;
  SquareMatrix prefix = SquareMatrix::Identity(d, d);
  for (const auto& p : seq.pulses) {
    prefix = expm_hermitian(controls.materialized[p.control], p.duration) *
             prefix;
    for (const auto& qop : conserved)
      audit = std::max(audit, commutator(prefix, qop.matrix).norm());
  }

  SynthesisReport rep;
  rep.best_infidelity = obj.infidelity;
  rep.leakage_norm = obj.leakage;
  rep.objective_value = obj.value;
  rep.iterations = 0;
  rep.restarts_used = 0;
  rep.sequence = seq;
  rep.symmetry_audit = audit;
  for (const auto& p : seq.pulses) {
    SquareMatrix hr =
        restrict_to(controls.materialized[p.control], code.isometry).matrix;
    auto period = duration_period(hr);
    if (period) {
      double folded = std::fmod(p.duration, *period);
      if (folded < 0.0) folded += *period;
      rep.durations_mod_period.push_back(folded);
    } else {
      rep.durations_mod_period.push_back(std::nullopt);
    }
  }
  return rep;
}

// Multi-start local search over the duration vector, control pattern fixed.
// Each restart runs BFGS, falls back to Nelder-Mead plus a BFGS polish when
// stuck, and the best (value, lowest restart index) wins.  Deterministic
// given the seed; restarts stop early once tol_stop is reached.
inline SynthesisReport synthesize(
    const ControlSet& controls, const LogicalCode& code,
    const SquareMatrix& target, const SynthesisOptions& opts = {},
    const std::vector<ConservedOperator>& audit_conserved = {}) {
  const SquareMatrix& t = encoded_target(code, target);
  if (opts.length < 1)
    throw ValidationError("E_RANGE", "length", "sequence length must be >= 1");
  if (opts.restarts < 1)
    throw ValidationError("E_RANGE", "restarts", "restarts must be >= 1");
  const int nc = int(controls.materialized.size());
  std::vector<int> pulse_controls(opts.length);
  for (int k = 0; k < opts.length; ++k) {
    int c = opts.pattern.empty() ? k % nc
                                 : opts.pattern[k % opts.pattern.size()];
    if (c < 0 || c >= nc)
      throw ValidationError("E_RANGE", "pattern",
                            "control index " + std::to_string(c) +
                                " out of range");
    pulse_controls[k] = c;
  }

  detail::ControlCache cache(controls);
  const Eigen::MatrixXcd& v = code.isometry;

  auto to_theta = [&](const Eigen::VectorXd& x) {
    if (opts.allow_negative) return x;
    return Eigen::VectorXd(x.cwiseProduct(x));
  };
  ObjectiveFn fn = [&](const Eigen::VectorXd& x,
                       Eigen::VectorXd* grad) -> double {
    Eigen::VectorXd theta = to_theta(x);
    ObjectiveValue val =
        detail::objective_grad(cache, v, t, pulse_controls, theta,
                               opts.leakage_weight, grad);
    if (grad && !opts.allow_negative)
      *grad = grad->cwiseProduct(2.0 * x);  // chain rule for theta = x^2
    return val.value;
  };

  OptimOptions local;
  local.max_iters = opts.max_iters;
  local.stop_below = opts.tol_stop;

  Eigen::VectorXd best_x;
  double best_value = std::numeric_limits<double>::infinity();
  int total_iters = 0;
  int restarts_used = 0;

  for (int r = 0; r < opts.restarts; ++r) {
    restarts_used = r + 1;
    std::mt19937_64 rng(opts.seed +
                        0x9E3779B97F4A7C15ULL * std::uint64_t(r + 1));
    std::uniform_real_distribution<double> dur(0.0, 2.0 * M_PI);
    Eigen::VectorXd x0(opts.length);
    for (int k = 0; k < opts.length; ++k) {
      double th = dur(rng);
      x0(k) = opts.allow_negative ? th : std::sqrt(th);
    }

    OptimResult res = bfgs_minimize(fn, x0, local);
    total_iters += res.iterations;
    if (res.value > opts.tol_stop) {
      OptimResult nm = nelder_mead(fn, res.x, local);
      total_iters += nm.iterations;
      if (nm.value < res.value) res = std::move(nm);
      OptimResult polish = bfgs_minimize(fn, res.x, local);
      total_iters += polish.iterations;
      if (polish.value < res.value) res = std::move(polish);
    }
    if (res.value < best_value) {
      best_value = res.value;
      best_x = res.x;
    }
    if (best_value <= opts.tol_stop) break;
  }

  PulseSequence seq;
  Eigen::VectorXd theta = to_theta(best_x);
  for (int k = 0; k < opts.length; ++k)
    seq.pulses.push_back({pulse_controls[k], theta(k)});

  SynthesisReport rep = verify_sequence(controls, code, target, seq,
                                        audit_conserved, opts.leakage_weight);
  rep.iterations = total_iters;
  rep.restarts_used = restarts_used;
  return rep;
}

}  // namespace symgate
