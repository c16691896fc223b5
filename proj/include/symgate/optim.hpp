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
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace symgate {

// f(x, grad_out): fill *grad_out when non-null, return the value.
using ObjectiveFn =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

struct OptimOptions {
  int max_iters = 500;
  double grad_tol = 1e-12;
  double f_tol = 1e-14;       // relative progress floor
  double stop_below = -1.0;   // early exit once value drops below (if >= 0)
};

struct OptimResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};

// Dense BFGS with Armijo backtracking.  Problem sizes here are tiny
// (L <= 32 durations) so the explicit inverse-Hessian update is fine.
inline OptimResult bfgs_minimize(const ObjectiveFn& fn,
                                 const Eigen::VectorXd& x0,
                                 const OptimOptions& opts = {}) {
  const int n = int(x0.size());
  Eigen::VectorXd x = x0, g(n), g_new(n);
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  double f = fn(x, &g);
  int it = 0;
  bool converged = false;

  for (; it < opts.max_iters; ++it) {
    if (opts.stop_below >= 0.0 && f < opts.stop_below) {
      converged = true;
      break;
    }
    if (g.norm() <= opts.grad_tol) {
      converged = true;
      break;
    }
    Eigen::VectorXd dir = -(hinv * g);
    double slope = g.dot(dir);
    if (slope >= 0.0) {  // curvature guard: reset to steepest descent
      hinv.setIdentity();
      dir = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    double f_new = f;
    Eigen::VectorXd x_new = x;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = x + step * dir;
      f_new = fn(x_new, nullptr);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    fn(x_new, &g_new);
    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      double rho = 1.0 / sy;
      Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
      Eigen::MatrixXd left = eye - rho * s * y.transpose();
      hinv = left * hinv * left.transpose() + rho * s * s.transpose();
    }
    double drop = f - f_new;
    x = x_new;
    f = f_new;
    g = g_new;
    if (drop >= 0.0 && drop <= opts.f_tol * (std::abs(f) + 1e-16)) {
      converged = true;
      ++it;
      break;
    }
  }
  if (opts.stop_below >= 0.0 && f < opts.stop_below) converged = true;
  return {std::move(x), f, it, converged};
}

// Classic Nelder-Mead (reflect/expand/contract/shrink) as the
// derivative-free fallback.
inline OptimResult nelder_mead(const ObjectiveFn& fn,
                               const Eigen::VectorXd& x0,
                               const OptimOptions& opts = {}) {
  const int n = int(x0.size());
  struct Vertex {
    Eigen::VectorXd x;
    double f;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, fn(x0, nullptr)});
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi = x0;
    xi(i) += (std::abs(x0(i)) > 1e-8) ? 0.05 * x0(i) : 0.25;
    simplex.push_back({xi, fn(xi, nullptr)});
  }
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::sort(simplex.begin(), simplex.end(), by_f);

  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (opts.stop_below >= 0.0 && simplex.front().f < opts.stop_below) break;
    if (simplex.back().f - simplex.front().f <=
        opts.f_tol * (std::abs(simplex.front().f) + 1e-16) + 1e-15)
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i].x;
    centroid /= double(n);
    Vertex& worst = simplex.back();

    Eigen::VectorXd xr = centroid + (centroid - worst.x);
    double fr = fn(xr, nullptr);
    if (fr < simplex.front().f) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst.x);
      double fe = fn(xe, nullptr);
      worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[n - 1].f) {
      worst = {xr, fr};
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (worst.x - centroid);
      double fc = fn(xc, nullptr);
      if (fc < worst.f) {
        worst = {xc, fc};
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i].x =
              simplex[0].x + 0.5 * (simplex[i].x - simplex[0].x);
          simplex[i].f = fn(simplex[i].x, nullptr);
        }
      }
    }
    std::sort(simplex.begin(), simplex.end(), by_f);
  }
  bool converged = it < opts.max_iters;
  return {simplex.front().x, simplex.front().f, it, converged};
}

}  // namespace symgate
