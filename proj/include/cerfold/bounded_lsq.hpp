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

#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

namespace cerfold {

/// Fills r (size m) and, when non-null, the m x n Jacobian at x.
using ResidualFunction =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jacobian)>;

struct LsqOptions {
  int max_iterations = 1000;
  /// Scaled gradient test: max_i |J_i . r| / (|J_i| |r|) over free variables.
  double gtol = 1e-10;
  /// Absolute projected-gradient test, max norm.
  double gtol_abs = 1e-10;
  double xtol = 1e-15;
  double ftol = 1e-16;
  double initial_damping = 1e-3;
};

enum class LsqStatus { kGradient, kStep, kCost };

std::string to_string(LsqStatus status);

struct LsqResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  Eigen::MatrixXd jacobian;
  double cost = 0.0;  // 0.5 |r|^2
  int iterations = 0;
  LsqStatus status = LsqStatus::kGradient;
  /// max norm of the gradient J^T r with components pushing into an active
  /// bound removed.
  double projected_gradient = 0.0;
};

/// Box-constrained Levenberg-Marquardt with Marquardt scaling, an active set
/// for variables pinned at a bound, steps projected onto the box, and the
/// Nielsen damping update. Throws ConvergenceError carrying the best iterate
/// when max_iterations is exhausted and std::invalid_argument for bad input.
LsqResult bounded_least_squares(const ResidualFunction& fn, const Eigen::VectorXd& x0,
                                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                const LsqOptions& options = {});

/// Projected gradient for a given gradient and position.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& gradient, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

}  // namespace cerfold
