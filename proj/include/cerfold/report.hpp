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

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cerfold/fitdecay.hpp"

namespace cerfold {

/// Concise value(uncertainty) notation with one significant digit of
/// uncertainty, e.g. (0.00081, 0.00009) -> "0.00081(9)".
std::string format_uncertainty(double value, double sigma);

struct Measurement {
  double value = 0.0;
  double sigma = 0.0;
};

/// Inverse of format_uncertainty; throws std::invalid_argument.
Measurement parse_uncertainty(const std::string& text);

std::string fit_report_json(const DecayFitResult& fit);
/// Reads a fit report back (model, parameters, covariance, chi2 and cells).
DecayFitResult parse_fit_report(const std::string& json_text);
/// Columns quad/2, lin/2, cst/2, (lin+cst)/2, (lin-cst)/2 per Pauli.
std::string budget_json(const ErrorBudget& budget);
std::string power_law_json(const PowerLawTable& table);

/// Plain-text tables in value(uncertainty) notation.
std::string budget_table(const ErrorBudget& budget);
std::string power_law_table(const PowerLawTable& table);

/// pauli,x,m,mean,std,count,prediction; one row per fitted cell.
std::string decay_curve_csv(const DecayFitResult& fit);

/// Per fold value: rows X, Y, Z; one column per measured qubit; entries
/// are single-qubit marginal error probabilities per dressed cycle.
struct Heatmap {
  int x = 1;
  Eigen::MatrixXd probabilities;  // 3 x k
};

/// From fitted rates: per-cycle fidelities of every fitted Pauli at each x,
/// transformed to error probabilities. Requires all 4^k - 1 non-identity
/// marginal Paulis to be fitted.
std::vector<Heatmap> heatmaps_from_fit(const DecayFitResult& fit, const std::vector<int>& x_values);
/// From raw cells: per-cycle fidelities from log-linear slopes in m.
std::vector<Heatmap> heatmaps_from_data(const DecayData& data);
std::string heatmap_csv(const Heatmap& map);

}  // namespace cerfold
