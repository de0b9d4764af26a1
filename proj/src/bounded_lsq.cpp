// Copyright 2026 The cerfold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cerfold/bounded_lsq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

#include "cerfold/errors.hpp"

namespace cerfold {

std::string to_string(LsqStatus status) {
  switch (status) {
    case LsqStatus::kGradient: return "gradient";
    case LsqStatus::kStep: return "step";
    case LsqStatus::kCost: return "cost";
  }
  return "unknown";
}

namespace {

bool at_lower(double x, double lo) { return x <= lo + 1e-14 * std::max(1.0, std::abs(lo)); }
bool at_upper(double x, double hi) { return x >= hi - 1e-14 * std::max(1.0, std::abs(hi)); }

}  // namespace

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& gradient, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  Eigen::VectorXd pg = gradient;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((at_lower(x[i], lower[i]) && gradient[i] > 0.0) ||
        (at_upper(x[i], upper[i]) && gradient[i] < 0.0)) {
      pg[i] = 0.0;
    }
  }
  return pg;
}

LsqResult bounded_least_squares(const ResidualFunction& fn, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                const LsqOptions& options) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("bounded_least_squares: bound size mismatch");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("bounded_least_squares: lower > upper");
  }

  LsqResult res;
  res.x = x0.cwiseMax(lower).cwiseMin(upper);
  fn(res.x, res.residual, &res.jacobian);
  if (res.jacobian.cols() != n || res.jacobian.rows() != res.residual.size()) {
    throw std::invalid_argument("bounded_least_squares: Jacobian has the wrong shape");
  }
  res.cost = 0.5 * res.residual.squaredNorm();
  if (!std::isfinite(res.cost)) {
    throw NumericalIntegrityError("bounded_least_squares: non-finite cost at the start point");
  }

  Eigen::MatrixXd a = res.jacobian.transpose() * res.jacobian;
  Eigen::VectorXd g = res.jacobian.transpose() * res.residual;
  double mu = options.initial_damping * std::max(a.diagonal().maxCoeff(), 1e-300);
  double nu = 2.0;

  Eigen::VectorXd r_trial;
  Eigen::MatrixXd j_trial;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    res.iterations = iter;
    const Eigen::VectorXd pg = projected_gradient(g, res.x, lower, upper);
    res.projected_gradient = pg.cwiseAbs().maxCoeff();

    // Scaled gradient over free variables.
    const double rnorm = res.residual.norm();
    double cosine = 0.0;
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned = (at_lower(res.x[i], lower[i]) && g[i] > 0.0) ||
                          (at_upper(res.x[i], upper[i]) && g[i] < 0.0) || lower[i] == upper[i];
      if (pinned) continue;
      free.push_back(i);
      const double cn = res.jacobian.col(i).norm();
      if (cn > 0.0 && rnorm > 0.0) cosine = std::max(cosine, std::abs(g[i]) / (cn * rnorm));
    }
    if (rnorm == 0.0 || free.empty() || cosine <= options.gtol ||
        res.projected_gradient <= options.gtol_abs) {
      res.status = LsqStatus::kGradient;
      return res;
    }

    // Damped normal equations on the free set.
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd af(nf, nf);
    Eigen::VectorXd gf(nf);
    for (Eigen::Index r = 0; r < nf; ++r) {
      gf[r] = g[free[static_cast<std::size_t>(r)]];
      for (Eigen::Index c = 0; c < nf; ++c) {
        af(r, c) = a(free[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(c)]);
      }
    }
    const double dmax = std::max(af.diagonal().maxCoeff(), 1e-300);
    Eigen::MatrixXd damped = af;
    for (Eigen::Index i = 0; i < nf; ++i) damped(i, i) += mu * std::max(af(i, i), 1e-12 * dmax);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
    Eigen::VectorXd df = ldlt.solve(-gf);
    if (ldlt.info() != Eigen::Success || !df.allFinite()) {
      mu *= nu;
      nu *= 2.0;
      continue;
    }

    Eigen::VectorXd trial = res.x;
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Eigen::Index i = free[static_cast<std::size_t>(k)];
      trial[i] = std::clamp(res.x[i] + df[k], lower[i], upper[i]);
    }
    const Eigen::VectorXd step = trial - res.x;
    const double step_norm = step.norm();
    if (step_norm <= options.xtol * (res.x.norm() + options.xtol)) {
      res.status = LsqStatus::kStep;
      return res;
    }

    fn(trial, r_trial, &j_trial);
    const double cost_trial = 0.5 * r_trial.squaredNorm();
    const double predicted = -(g.dot(step) + 0.5 * step.dot(a * step));
    const double actual = res.cost - cost_trial;
    const double rho = predicted > 0.0 ? actual / predicted : -1.0;

    if (std::isfinite(cost_trial) && actual > 0.0 && rho > 0.0) {
      const double old_cost = res.cost;
      res.x = trial;
      res.residual = r_trial;
      res.jacobian = j_trial;
      res.cost = cost_trial;
      a = res.jacobian.transpose() * res.jacobian;
      g = res.jacobian.transpose() * res.residual;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (actual <= options.ftol * old_cost) {
        res.status = LsqStatus::kCost;
        res.iterations = iter + 1;
        res.projected_gradient =
            projected_gradient(g, res.x, lower, upper).cwiseAbs().maxCoeff();
        return res;
      }
    } else {
      mu *= nu;
      nu *= 2.0;
      if (!std::isfinite(mu) || mu > 1e300) {
        res.status = LsqStatus::kStep;
        return res;
      }
    }
  }
  throw ConvergenceError("bounded_least_squares: no convergence after " +
                             std::to_string(options.max_iterations) + " iterations",
                         res.x);
}

}  // namespace cerfold
