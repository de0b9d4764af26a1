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

#include "cerfold/fitdecay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <Eigen/QR>

#include "cerfold/errors.hpp"

namespace cerfold {

namespace {

constexpr double kVarianceFloor = 1e-14;
constexpr double kLogCutoff = 0.05;

}  // namespace

const CellStats& DecayData::cell(std::size_t pauli, std::size_t x, std::size_t m) const {
  return cells.at((pauli * x_values.size() + x) * m_values.size() + m);
}

DecayData aggregate(const std::vector<FidelityRecord>& records,
                    const std::vector<PauliString>& paulis) {
  if (records.empty()) throw ConfigError("fit: no records");
  std::map<std::tuple<PauliString, int, int>, std::vector<double>> groups;
  std::set<PauliString> present;
  std::set<int> xs, ms;
  for (const auto& r : records) {
    groups[{r.pauli, r.x, r.m}].push_back(r.estimate);
    present.insert(r.pauli);
    xs.insert(r.x);
    ms.insert(r.m);
  }
  DecayData data;
  data.paulis = paulis.empty() ? std::vector<PauliString>(present.begin(), present.end()) : paulis;
  data.x_values.assign(xs.begin(), xs.end());
  data.m_values.assign(ms.begin(), ms.end());
  const int k = data.paulis.front().num_qubits();
  for (const auto& p : data.paulis) {
    if (p.num_qubits() != k) throw ConfigError("fit: Paulis have different lengths");
    if (p.is_identity()) throw ConfigError("fit: the identity cannot be fitted");
  }
  if (data.x_values.size() < 2 || data.m_values.size() < 2) {
    throw ConfigError("fit: need at least two distinct x and two distinct m values (got " +
                      std::to_string(data.x_values.size()) + " x, " +
                      std::to_string(data.m_values.size()) + " m)");
  }

  std::vector<std::string> missing;
  double pooled_sum = 0.0;
  int pooled_n = 0;
  for (const auto& p : data.paulis) {
    for (int x : data.x_values) {
      for (int m : data.m_values) {
        const auto it = groups.find({p, x, m});
        CellStats c{p, x, m, 0, 0.0, 0.0, 0.0};
        if (it == groups.end()) {
          missing.push_back("(" + p.str() + ", x=" + std::to_string(x) + ", m=" +
                            std::to_string(m) + ")");
        } else {
          const auto& v = it->second;
          c.count = static_cast<int>(v.size());
          double s = 0.0;
          for (double e : v) s += e;
          c.mean = s / c.count;
          if (c.count > 1) {
            double ss = 0.0;
            for (double e : v) ss += (e - c.mean) * (e - c.mean);
            const double var = ss / (c.count - 1);
            c.stddev = std::sqrt(var);
            c.sem_variance = var / c.count;
            pooled_sum += var;
            ++pooled_n;
          }
        }
        data.cells.push_back(c);
      }
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "fit: " << missing.size() << " missing cell(s):";
    for (const auto& s : missing) msg << ' ' << s;
    throw ConfigError(msg.str());
  }
  const double pooled = pooled_n > 0 ? pooled_sum / pooled_n : 0.0;
  bool any_variance = false;
  for (auto& c : data.cells) {
    if (c.count == 1) c.sem_variance = pooled;
    if (c.sem_variance > kVarianceFloor) any_variance = true;
  }
  data.unit_weights = !any_variance;
  for (auto& c : data.cells) {
    c.sem_variance = data.unit_weights ? 1.0 : std::max(c.sem_variance, kVarianceFloor);
  }
  return data;
}

// ---------------------------------------------------------------------------
// DecayModel

DecayModel::DecayModel(std::vector<PauliString> paulis) : paulis_(std::move(paulis)) {
  const auto n = static_cast<Eigen::Index>(paulis_.size());
  coupling_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      coupling_(r, c) =
          anticommute(paulis_[static_cast<std::size_t>(r)], paulis_[static_cast<std::size_t>(c)]) ? 1.0 : 0.0;
    }
  }
}

DecayModel::DecayModel(std::vector<PauliString> paulis, Eigen::MatrixXd coupling)
    : paulis_(std::move(paulis)), coupling_(std::move(coupling)) {
  const auto n = static_cast<Eigen::Index>(paulis_.size());
  if (coupling_.rows() != n || coupling_.cols() != n) {
    throw std::invalid_argument("DecayModel: coupling matrix must be N x N");
  }
}

DecayModel DecayModel::power_law(const PauliString& p) {
  return DecayModel({p}, Eigen::MatrixXd::Identity(1, 1));
}

int DecayModel::index_of(const PauliString& p) const {
  const auto it = std::find(paulis_.begin(), paulis_.end(), p);
  return it == paulis_.end() ? -1 : static_cast<int>(it - paulis_.begin());
}

std::vector<std::string> DecayModel::parameter_names() const {
  std::vector<std::string> out;
  for (const char* prefix : {"A_", "quad_", "lin_", "cst_"}) {
    for (const auto& p : paulis_) out.push_back(prefix + p.str());
  }
  return out;
}

Eigen::VectorXd DecayModel::lower_bounds() const {
  return Eigen::VectorXd::Zero(num_parameters());
}

Eigen::VectorXd DecayModel::upper_bounds() const {
  Eigen::VectorXd u = Eigen::VectorXd::Ones(num_parameters());
  u.head(size()).setConstant(1.2);
  return u;
}

double DecayModel::decay_rate(const Eigen::VectorXd& params, int i, double x) const {
  const int n = size();
  double s = 0.0;
  for (int q = 0; q < n; ++q) {
    const double k = coupling_(i, q);
    if (k == 0.0) continue;
    s += k * (params[n + q] * x * x + params[2 * n + q] * x + params[3 * n + q]);
  }
  return s;
}

double DecayModel::predict(const Eigen::VectorXd& params, int i, double x, double m) const {
  return params[i] * std::pow(1.0 - decay_rate(params, i, x), m);
}

Eigen::RowVectorXd DecayModel::gradient(const Eigen::VectorXd& params, int i, double x,
                                        double m) const {
  const int n = size();
  Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(num_parameters());
  const double base = 1.0 - decay_rate(params, i, x);
  g[i] = std::pow(base, m);
  const double d = -params[i] * m * std::pow(base, m - 1.0);
  for (int q = 0; q < n; ++q) {
    const double k = coupling_(i, q);
    if (k == 0.0) continue;
    g[n + q] = d * k * x * x;
    g[2 * n + q] = d * k * x;
    g[3 * n + q] = d * k;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Fit result accessors

double DecayFitResult::stderr_of(Eigen::Index k) const {
  return std::sqrt(std::max(0.0, covariance(k, k)));
}

namespace {

int require_index(const DecayModel& model, const PauliString& p) {
  const int i = model.index_of(p);
  if (i < 0) throw std::invalid_argument("Pauli " + p.str() + " was not fitted");
  return i;
}

}  // namespace

double DecayFitResult::amplitude(const PauliString& p) const {
  return parameters[model.amplitude_index(require_index(model, p))];
}
double DecayFitResult::quad(const PauliString& p) const {
  return parameters[model.quad_index(require_index(model, p))];
}
double DecayFitResult::lin(const PauliString& p) const {
  return parameters[model.lin_index(require_index(model, p))];
}
double DecayFitResult::cst(const PauliString& p) const {
  return parameters[model.cst_index(require_index(model, p))];
}

double DecayFitResult::linear_variance(const Eigen::VectorXd& w) const {
  return std::max(0.0, w.dot(covariance * w));
}

Eigen::MatrixXd DecayFitResult::correlation() const {
  const Eigen::Index n = covariance.rows();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double d = std::sqrt(std::max(0.0, covariance(r, r)) * std::max(0.0, covariance(k, k)));
      c(r, k) = d > 0.0 ? covariance(r, k) / d : (r == k ? 1.0 : 0.0);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Initialization

namespace {

// Least squares y = X b; returns b.
Eigen::VectorXd regress(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return x.completeOrthogonalDecomposition().solve(y);
}

}  // namespace

Eigen::VectorXd initialize(const DecayData& data, const DecayModel& model) {
  const int n = model.size();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(model.num_parameters());
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n), beta = alpha, gamma = alpha;
  bool any = false;

  for (int i = 0; i < n; ++i) {
    const auto pi = static_cast<std::size_t>(
        std::find(data.paulis.begin(), data.paulis.end(), model.paulis()[static_cast<std::size_t>(i)]) -
        data.paulis.begin());
    if (pi >= data.paulis.size()) throw std::invalid_argument("initialize: Pauli not in data");
    std::vector<double> xs, rates, amps;
    for (std::size_t xi = 0; xi < data.x_values.size(); ++xi) {
      std::vector<double> mv, lv;
      for (std::size_t mi = 0; mi < data.m_values.size(); ++mi) {
        const auto& c = data.cell(pi, xi, mi);
        if (c.mean <= kLogCutoff) continue;
        mv.push_back(c.m);
        lv.push_back(std::log(c.mean));
      }
      if (mv.size() < 2) continue;
      Eigen::MatrixXd design(static_cast<Eigen::Index>(mv.size()), 2);
      Eigen::VectorXd y(static_cast<Eigen::Index>(mv.size()));
      for (std::size_t k = 0; k < mv.size(); ++k) {
        design(static_cast<Eigen::Index>(k), 0) = 1.0;
        design(static_cast<Eigen::Index>(k), 1) = mv[k];
        y[static_cast<Eigen::Index>(k)] = lv[k];
      }
      const Eigen::VectorXd b = regress(design, y);
      xs.push_back(data.x_values[xi]);
      rates.push_back(1.0 - std::exp(b[1]));
      amps.push_back(std::exp(b[0]));
    }
    if (xs.empty()) continue;
    any = true;
    double amp = 0.0;
    for (double a : amps) amp += a;
    p[i] = amp / static_cast<double>(amps.size());
    const int cols = xs.size() >= 3 ? 3 : static_cast<int>(xs.size());
    Eigen::MatrixXd design(static_cast<Eigen::Index>(xs.size()), cols);
    Eigen::VectorXd y(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      // Columns: constant, x, x^2 (dropping the highest powers when short).
      design(r, 0) = 1.0;
      if (cols > 1) design(r, 1) = xs[k];
      if (cols > 2) design(r, 2) = xs[k] * xs[k];
      y[r] = rates[k];
    }
    const Eigen::VectorXd b = regress(design, y);
    gamma[i] = b[0];
    if (cols > 1) beta[i] = b[1];
    if (cols > 2) alpha[i] = b[2];
  }

  if (!any) {
    p.head(n).setOnes();
    p.tail(3 * n).setConstant(1e-4);
    return p;
  }
  for (int i = 0; i < n; ++i) {
    if (p[i] == 0.0) p[i] = 1.0;
  }
  const auto cod = model.coupling().completeOrthogonalDecomposition();
  p.segment(n, n) = cod.solve(alpha);
  p.segment(2 * n, n) = cod.solve(beta);
  p.segment(3 * n, n) = cod.solve(gamma);
  return p.cwiseMax(model.lower_bounds()).cwiseMin(model.upper_bounds());
}

// ---------------------------------------------------------------------------
// Fitting

void decay_residuals(const DecayData& data, const DecayModel& model, const Eigen::VectorXd& params,
                     Eigen::VectorXd& residual, Eigen::MatrixXd* jacobian) {
  std::vector<int> model_index(data.paulis.size(), -1);
  std::size_t used = 0;
  for (std::size_t k = 0; k < data.paulis.size(); ++k) {
    model_index[k] = model.index_of(data.paulis[k]);
    if (model_index[k] >= 0) ++used;
  }
  const std::size_t per_pauli = data.x_values.size() * data.m_values.size();
  const auto rows = static_cast<Eigen::Index>(used * per_pauli);
  residual.resize(rows);
  if (jacobian) jacobian->setZero(rows, model.num_parameters());
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < data.paulis.size(); ++k) {
    const int i = model_index[k];
    if (i < 0) continue;
    for (std::size_t c = k * per_pauli; c < (k + 1) * per_pauli; ++c) {
      const auto& cell = data.cells[c];
      const double w = 1.0 / std::sqrt(cell.sem_variance);
      residual[row] = w * (model.predict(params, i, cell.x, cell.m) - cell.mean);
      if (jacobian) jacobian->row(row) = w * model.gradient(params, i, cell.x, cell.m);
      ++row;
    }
  }
}

DecayFitResult fit(const DecayData& data, const DecayModel& model, const FitOptions& options) {
  Eigen::VectorXd x0 = options.initial ? *options.initial : initialize(data, model);
  if (x0.size() != model.num_parameters()) {
    throw std::invalid_argument("fit: initial vector has the wrong size");
  }
  Eigen::VectorXd lo = model.lower_bounds();
  Eigen::VectorXd hi = model.upper_bounds();
  x0 = x0.cwiseMax(lo).cwiseMin(hi);
  for (Eigen::Index k : options.fixed) {
    if (k < 0 || k >= x0.size()) throw std::invalid_argument("fit: fixed index out of range");
    lo[k] = hi[k] = x0[k];
  }
  const ResidualFunction fn = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r,
                                  Eigen::MatrixXd* j) { decay_residuals(data, model, p, r, j); };
  const LsqResult lsq = bounded_least_squares(fn, x0, lo, hi, options.lsq);

  DecayFitResult out;
  out.model = model;
  out.parameters = lsq.x;
  out.unit_weights = data.unit_weights;
  out.status = lsq.status;
  out.iterations = lsq.iterations;
  out.projected_gradient = lsq.projected_gradient;
  out.residuals = lsq.residual;
  out.chi2 = lsq.residual.squaredNorm();
  const int free_params = model.num_parameters() - static_cast<int>(options.fixed.size());
  out.dof = static_cast<int>(lsq.residual.size()) - free_params;
  out.reduced_chi2 = out.dof > 0 ? out.chi2 / out.dof : out.chi2;

  Eigen::MatrixXd j = lsq.jacobian;
  for (Eigen::Index k : options.fixed) j.col(k).setZero();
  const Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::MatrixXd cov = jtj.completeOrthogonalDecomposition().pseudoInverse() * out.reduced_chi2;
  out.covariance = 0.5 * (cov + cov.transpose());

  const std::size_t per_pauli = data.x_values.size() * data.m_values.size();
  out.predictions.resize(out.residuals.size());
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < data.paulis.size(); ++k) {
    const int i = model.index_of(data.paulis[k]);
    if (i < 0) continue;
    for (std::size_t c = k * per_pauli; c < (k + 1) * per_pauli; ++c) {
      const auto& cell = data.cells[c];
      out.cells.push_back(cell);
      out.predictions[row++] = model.predict(out.parameters, i, cell.x, cell.m);
    }
  }
  return out;
}

DecayFitResult fit(const DecayData& data, const FitOptions& options) {
  return fit(data, DecayModel(data.paulis), options);
}

DecayFitResult fit(const std::vector<FidelityRecord>& records,
                   const std::vector<PauliString>& paulis, const FitOptions& options) {
  return fit(aggregate(records, paulis), options);
}

// ---------------------------------------------------------------------------
// Budgets

const BudgetEntry& ErrorBudget::at(const PauliString& p) const {
  for (const auto& e : entries) {
    if (e.pauli == p) return e;
  }
  throw std::invalid_argument("budget has no entry for " + p.str());
}

ErrorBudget budget(const DecayFitResult& fit) {
  const DecayModel& model = fit.model;
  const Eigen::Index np = model.num_parameters();
  ErrorBudget b;
  for (int i = 0; i < model.size(); ++i) {
    const Eigen::Index qi = model.quad_index(i), li = model.lin_index(i), ci = model.cst_index(i);
    auto unit = [&](std::initializer_list<std::pair<Eigen::Index, double>> terms) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(np);
      for (auto [k, v] : terms) w[k] = v;
      return w;
    };
    BudgetEntry e;
    e.pauli = model.paulis()[static_cast<std::size_t>(i)];
    e.coherent = fit.parameters[qi] / 2.0;
    e.coherent_err = std::sqrt(fit.linear_variance(unit({{qi, 0.5}})));
    e.lin_half = fit.parameters[li] / 2.0;
    e.lin_half_err = std::sqrt(fit.linear_variance(unit({{li, 0.5}})));
    e.cst_half = fit.parameters[ci] / 2.0;
    e.cst_half_err = std::sqrt(fit.linear_variance(unit({{ci, 0.5}})));
    e.other = e.lin_half + e.cst_half;
    e.other_err = std::sqrt(fit.linear_variance(unit({{li, 0.5}, {ci, 0.5}})));
    e.difference = e.lin_half - e.cst_half;
    e.difference_err = std::sqrt(fit.linear_variance(unit({{li, 0.5}, {ci, -0.5}})));
    const double d = std::sqrt(std::max(0.0, fit.covariance(li, li)) *
                               std::max(0.0, fit.covariance(ci, ci)));
    e.correlation = d > 0.0 ? fit.covariance(li, ci) / d : 0.0;
    b.entries.push_back(e);
  }
  return b;
}

const PowerLawEntry& PowerLawTable::at(const PauliString& p) const {
  for (const auto& e : entries) {
    if (e.pauli == p) return e;
  }
  throw std::invalid_argument("power-law table has no entry for " + p.str());
}

PowerLawTable power_law_from_fit(const DecayFitResult& fit) {
  const DecayModel& model = fit.model;
  const int n = model.size();
  PowerLawTable t;
  for (int i = 0; i < n; ++i) {
    PowerLawEntry e;
    e.pauli = model.paulis()[static_cast<std::size_t>(i)];
    e.amplitude = fit.parameters[i];
    e.amplitude_err = fit.stderr_of(i);
    auto sum = [&](int block, double& value, double& err) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(model.num_parameters());
      for (int q = 0; q < n; ++q) w[block * n + q] = model.coupling()(i, q);
      value = w.dot(fit.parameters);
      err = std::sqrt(fit.linear_variance(w));
    };
    sum(1, e.a, e.a_err);
    sum(2, e.b, e.b_err);
    sum(3, e.c, e.c_err);
    t.entries.push_back(e);
  }
  return t;
}

PowerLawTable fit_power_law(const DecayData& data, const LsqOptions& options) {
  PowerLawTable t;
  for (const auto& p : data.paulis) {
    FitOptions fo;
    fo.lsq = options;
    const DecayFitResult r = fit(data, DecayModel::power_law(p), fo);
    PowerLawEntry e;
    e.pauli = p;
    e.amplitude = r.parameters[0];
    e.amplitude_err = r.stderr_of(0);
    e.a = r.parameters[1];
    e.a_err = r.stderr_of(1);
    e.b = r.parameters[2];
    e.b_err = r.stderr_of(2);
    e.c = r.parameters[3];
    e.c_err = r.stderr_of(3);
    t.entries.push_back(e);
  }
  return t;
}

}  // namespace cerfold
