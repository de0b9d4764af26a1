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

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cerfold {

/// Invalid user configuration: malformed files, out-of-range settings,
/// insufficient data grids. Dimension mismatches in the API use
/// std::invalid_argument instead.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed quantity violated a physical invariant (trace preservation,
/// probabilities outside [0, 1], ...).
class NumericalIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the decay fitter when the solver runs out of iterations.
/// Carries the best parameter vector seen so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best)
      : std::runtime_error(what), best_parameters_(std::move(best)) {}

  const Eigen::VectorXd& best_parameters() const { return best_parameters_; }

 private:
  Eigen::VectorXd best_parameters_;
};

}  // namespace cerfold
