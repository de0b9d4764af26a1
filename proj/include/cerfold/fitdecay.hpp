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

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cerfold/bounded_lsq.hpp"
#include "cerfold/pauli.hpp"
#include "cerfold/simulate.hpp"

namespace cerfold {

/// Sample statistics of one (P, x, m) cell over randomizations.
struct CellStats {
  PauliString pauli;
  int x = 1;
  int m = 1;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;       // sample standard deviation (0 for one record)
  double sem_variance = 0.0; // variance of the mean used for weighting
};

/// Complete factorial grid of cells, ordered by Pauli, x, m.
struct DecayData {
  std::vector<PauliString> paulis;
  std::vector<int> x_values;
  std::vector<int> m_values;
  std::vector<CellStats> cells;
  /// True when no cell carries variance information; the fit then uses
  /// unit weights.
  bool unit_weights = false;

  const CellStats& cell(std::size_t pauli, std::size_t x, std::size_t m) const;
};

/// Groups records into cells. `paulis` restricts and orders the fitted set
/// (default: every Pauli present, sorted). Throws ConfigError when fewer than
/// two x or m values exist or when cells are missing; the message lists them.
DecayData aggregate(const std::vector<FidelityRecord>& records,
                    const std::vector<PauliString>& paulis = {});

/// f_P(x, m) = A_P (1 - sum_Q K(P, Q) (quad_Q x^2 + lin_Q x + cst_Q))^m.
///
/// Parameters are stored as [A..., quad..., lin..., cst...] (4N entries). The
/// coupling K defaults to the anticommutation indicator between the fitted
/// Paulis; the identity coupling gives the per-fidelity power-law form
/// A_P (1 - a_P x^2 - b_P x - c_P)^m.
class DecayModel {
 public:
  DecayModel() = default;
  explicit DecayModel(std::vector<PauliString> paulis);
  DecayModel(std::vector<PauliString> paulis, Eigen::MatrixXd coupling);

  static DecayModel power_law(const PauliString& p);

  int size() const { return static_cast<int>(paulis_.size()); }
  int num_parameters() const { return 4 * size(); }
  const std::vector<PauliString>& paulis() const { return paulis_; }
  const Eigen::MatrixXd& coupling() const { return coupling_; }
  int index_of(const PauliString& p) const;  // -1 when absent

  Eigen::Index amplitude_index(int i) const { return i; }
  Eigen::Index quad_index(int i) const { return size() + i; }
  Eigen::Index lin_index(int i) const { return 2 * size() + i; }
  Eigen::Index cst_index(int i) const { return 3 * size() + i; }
  std::vector<std::string> parameter_names() const;

  Eigen::VectorXd lower_bounds() const;
  Eigen::VectorXd upper_bounds() const;

  /// Per-cycle infidelity sum for Pauli i at fold x.
  double decay_rate(const Eigen::VectorXd& params, int i, double x) const;
  double predict(const Eigen::VectorXd& params, int i, double x, double m) const;
  /// d predict / d params.
  Eigen::RowVectorXd gradient(const Eigen::VectorXd& params, int i, double x, double m) const;

 private:
  std::vector<PauliString> paulis_;
  Eigen::MatrixXd coupling_;
};

struct FitOptions {
  LsqOptions lsq;
  std::optional<Eigen::VectorXd> initial;  // default: initialize()
  /// Parameter indices held at their initial value.
  std::vector<Eigen::Index> fixed;
};

struct DecayFitResult {
  DecayModel model;
  Eigen::VectorXd parameters;
  Eigen::MatrixXd covariance;
  double chi2 = 0.0;
  int dof = 0;
  double reduced_chi2 = 0.0;
  std::vector<CellStats> cells;
  Eigen::VectorXd predictions;  // per cell
  Eigen::VectorXd residuals;    // weighted, per cell
  bool unit_weights = false;
  LsqStatus status = LsqStatus::kGradient;
  int iterations = 0;
  double projected_gradient = 0.0;

  double value(Eigen::Index k) const { return parameters[k]; }
  double stderr_of(Eigen::Index k) const;
  double amplitude(const PauliString& p) const;
  double quad(const PauliString& p) const;
  double lin(const PauliString& p) const;
  double cst(const PauliString& p) const;
  /// Variance of w . params.
  double linear_variance(const Eigen::VectorXd& w) const;
  Eigen::MatrixXd correlation() const;
};

/// Starting point from log-linear decay slopes, a quadratic in x and a
/// least-squares solve through the coupling matrix, clipped to the bounds.
Eigen::VectorXd initialize(const DecayData& data, const DecayModel& model);

/// Weighted bounded least squares. Throws ConvergenceError when the solver
/// runs out of iterations.
DecayFitResult fit(const DecayData& data, const DecayModel& model, const FitOptions& options = {});
DecayFitResult fit(const DecayData& data, const FitOptions& options = {});
DecayFitResult fit(const std::vector<FidelityRecord>& records,
                   const std::vector<PauliString>& paulis = {}, const FitOptions& options = {});

/// Weighted residual vector and Jacobian of the model at `params`.
void decay_residuals(const DecayData& data, const DecayModel& model, const Eigen::VectorXd& params,
                     Eigen::VectorXd& residual, Eigen::MatrixXd* jacobian);

struct BudgetEntry {
  PauliString pauli;
  double coherent = 0.0, coherent_err = 0.0;      // quad/2
  double lin_half = 0.0, lin_half_err = 0.0;      // lin/2
  double cst_half = 0.0, cst_half_err = 0.0;      // cst/2
  double other = 0.0, other_err = 0.0;            // (lin + cst)/2
  double difference = 0.0, difference_err = 0.0;  // (lin - cst)/2
  double correlation = 0.0;                       // corr(lin, cst)
};

struct ErrorBudget {
  std::vector<BudgetEntry> entries;
  const BudgetEntry& at(const PauliString& p) const;
};

ErrorBudget budget(const DecayFitResult& fit);

/// Per-fidelity coefficients of A_P (1 - a_P x^2 - b_P x - c_P)^m.
struct PowerLawEntry {
  PauliString pauli;
  double amplitude = 0.0, amplitude_err = 0.0;
  double a = 0.0, a_err = 0.0;
  double b = 0.0, b_err = 0.0;
  double c = 0.0, c_err = 0.0;
};

struct PowerLawTable {
  std::vector<PowerLawEntry> entries;
  const PowerLawEntry& at(const PauliString& p) const;
};

/// a_P, b_P, c_P as coupling-weighted sums of the fitted rates, with
/// uncertainties propagated through the covariance.
PowerLawTable power_law_from_fit(const DecayFitResult& fit);
/// Independent per-Pauli fits of the power-law form.
PowerLawTable fit_power_law(const DecayData& data, const LsqOptions& options = {});

}  // namespace cerfold
