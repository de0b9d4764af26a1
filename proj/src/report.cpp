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

#include "cerfold/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cerfold/errors.hpp"

namespace cerfold {

std::string format_uncertainty(double value, double sigma) {
  if (!std::isfinite(value)) throw std::invalid_argument("format_uncertainty: non-finite value");
  char buf[96];
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    std::snprintf(buf, sizeof(buf), "%.6g(0)", value);
    return buf;
  }
  int decimals = -static_cast<int>(std::floor(std::log10(sigma)));
  long digit = std::lround(sigma * std::pow(10.0, decimals));
  if (digit >= 10) {
    --decimals;
    digit = std::lround(sigma * std::pow(10.0, decimals));
  } else if (digit < 1) {
    ++decimals;
    digit = std::lround(sigma * std::pow(10.0, decimals));
  }
  if (decimals >= 0) {
    const double scale = std::pow(10.0, decimals);
    double rounded = std::round(value * scale) / scale;
    if (rounded == 0.0) rounded = 0.0;  // drop the sign of -0
    std::snprintf(buf, sizeof(buf), "%.*f(%ld)", decimals, rounded, digit);
  } else {
    const double scale = std::pow(10.0, -decimals);
    double rounded = std::round(value / scale) * scale;
    if (rounded == 0.0) rounded = 0.0;
    std::snprintf(buf, sizeof(buf), "%.0f(%.0f)", rounded, static_cast<double>(digit) * scale);
  }
  return buf;
}

Measurement parse_uncertainty(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.find(')');
  if (open == std::string::npos || close != text.size() - 1 || close < open + 2) {
    throw std::invalid_argument("parse_uncertainty: expected value(digits), got '" + text + "'");
  }
  const std::string v = text.substr(0, open);
  const std::string d = text.substr(open + 1, close - open - 1);
  if (!std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("parse_uncertainty: bad uncertainty digits in '" + text + "'");
  }
  Measurement m;
  std::size_t used = 0;
  try {
    m.value = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("parse_uncertainty: bad value in '" + text + "'");
  }
  if (used != v.size()) throw std::invalid_argument("parse_uncertainty: bad value in '" + text + "'");
  const auto dot = v.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(v.size() - dot - 1);
  m.sigma = std::stod(d) * std::pow(10.0, -decimals);
  return m;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string fit_report_json(const DecayFitResult& fit) {
  json doc;
  const auto names = fit.model.parameter_names();
  doc["parameter_names"] = names;
  json params = json::object(), errs = json::object();
  for (std::size_t k = 0; k < names.size(); ++k) {
    params[names[k]] = fit.parameters[static_cast<Eigen::Index>(k)];
    errs[names[k]] = fit.stderr_of(static_cast<Eigen::Index>(k));
  }
  doc["parameters"] = params;
  doc["standard_errors"] = errs;
  doc["covariance"] = matrix_json(fit.covariance);
  doc["correlation"] = matrix_json(fit.correlation());
  doc["chi2"] = fit.chi2;
  doc["dof"] = fit.dof;
  doc["reduced_chi2"] = fit.reduced_chi2;
  doc["unit_weights"] = fit.unit_weights;
  doc["status"] = to_string(fit.status);
  doc["iterations"] = fit.iterations;
  doc["projected_gradient"] = fit.projected_gradient;
  json cells = json::array();
  for (std::size_t i = 0; i < fit.cells.size(); ++i) {
    const auto& c = fit.cells[i];
    cells.push_back({{"pauli", c.pauli.str()},
                     {"x", c.x},
                     {"m", c.m},
                     {"count", c.count},
                     {"mean", c.mean},
                     {"std", c.stddev},
                     {"prediction", fit.predictions[static_cast<Eigen::Index>(i)]},
                     {"residual", fit.residuals[static_cast<Eigen::Index>(i)]}});
  }
  doc["cells"] = cells;
  return doc.dump(2);
}

DecayFitResult parse_fit_report(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("fit report: invalid JSON: ") + e.what());
  }
  try {
    const auto names = doc.at("parameter_names").get<std::vector<std::string>>();
    if (names.empty() || names.size() % 4 != 0) {
      throw ConfigError("fit report: parameter_names must hold 4N entries");
    }
    const std::size_t n = names.size() / 4;
    std::vector<PauliString> paulis;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& name = names[i];
      if (name.rfind("A_", 0) != 0) throw ConfigError("fit report: unexpected name '" + name + "'");
      paulis.push_back(PauliString::parse(name.substr(2)));
    }
    DecayFitResult fit;
    fit.model = DecayModel(paulis);
    fit.parameters.resize(static_cast<Eigen::Index>(names.size()));
    for (std::size_t k = 0; k < names.size(); ++k) {
      fit.parameters[static_cast<Eigen::Index>(k)] = doc.at("parameters").at(names[k]).get<double>();
    }
    const auto cov = doc.at("covariance").get<std::vector<std::vector<double>>>();
    const auto np = static_cast<Eigen::Index>(names.size());
    if (static_cast<Eigen::Index>(cov.size()) != np) throw ConfigError("fit report: covariance size");
    fit.covariance.resize(np, np);
    for (Eigen::Index r = 0; r < np; ++r) {
      if (static_cast<Eigen::Index>(cov[static_cast<std::size_t>(r)].size()) != np) {
        throw ConfigError("fit report: covariance size");
      }
      for (Eigen::Index c = 0; c < np; ++c) {
        fit.covariance(r, c) = cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
    }
    fit.chi2 = doc.at("chi2").get<double>();
    fit.dof = doc.at("dof").get<int>();
    fit.reduced_chi2 = doc.at("reduced_chi2").get<double>();
    fit.unit_weights = doc.at("unit_weights").get<bool>();
    fit.iterations = doc.at("iterations").get<int>();
    fit.projected_gradient = doc.at("projected_gradient").get<double>();
    const auto status = doc.at("status").get<std::string>();
    fit.status = status == "step" ? LsqStatus::kStep
                                  : (status == "cost" ? LsqStatus::kCost : LsqStatus::kGradient);
    const auto& cells = doc.at("cells");
    fit.predictions.resize(static_cast<Eigen::Index>(cells.size()));
    fit.residuals.resize(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      CellStats s;
      s.pauli = PauliString::parse(c.at("pauli").get<std::string>());
      s.x = c.at("x").get<int>();
      s.m = c.at("m").get<int>();
      s.count = c.at("count").get<int>();
      s.mean = c.at("mean").get<double>();
      s.stddev = c.at("std").get<double>();
      fit.cells.push_back(s);
      fit.predictions[static_cast<Eigen::Index>(i)] = c.at("prediction").get<double>();
      fit.residuals[static_cast<Eigen::Index>(i)] = c.at("residual").get<double>();
    }
    return fit;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("fit report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("fit report: ") + e.what());
  }
}

std::string budget_json(const ErrorBudget& budget) {
  json rows = json::array();
  for (const auto& e : budget.entries) {
    rows.push_back({{"pauli", e.pauli.str()},
                    {"quad_half", {{"value", e.coherent}, {"sigma", e.coherent_err}}},
                    {"lin_half", {{"value", e.lin_half}, {"sigma", e.lin_half_err}}},
                    {"cst_half", {{"value", e.cst_half}, {"sigma", e.cst_half_err}}},
                    {"sum_half", {{"value", e.other}, {"sigma", e.other_err}}},
                    {"difference_half", {{"value", e.difference}, {"sigma", e.difference_err}}},
                    {"corr_lin_cst", e.correlation}});
  }
  return json{{"budget", rows}}.dump(2);
}

std::string power_law_json(const PowerLawTable& table) {
  json rows = json::array();
  for (const auto& e : table.entries) {
    rows.push_back({{"pauli", e.pauli.str()},
                    {"A", {{"value", e.amplitude}, {"sigma", e.amplitude_err}}},
                    {"a", {{"value", e.a}, {"sigma", e.a_err}}},
                    {"b", {{"value", e.b}, {"sigma", e.b_err}}},
                    {"c", {{"value", e.c}, {"sigma", e.c_err}}}});
  }
  return json{{"power_law", rows}}.dump(2);
}

std::string budget_table(const ErrorBudget& budget) {
  std::ostringstream out;
  out << "pauli  quad/2  lin/2  cst/2  (lin+cst)/2  (lin-cst)/2\n";
  for (const auto& e : budget.entries) {
    out << e.pauli.str() << "  " << format_uncertainty(e.coherent, e.coherent_err) << "  "
        << format_uncertainty(e.lin_half, e.lin_half_err) << "  "
        << format_uncertainty(e.cst_half, e.cst_half_err) << "  "
        << format_uncertainty(e.other, e.other_err) << "  "
        << format_uncertainty(e.difference, e.difference_err) << '\n';
  }
  return out.str();
}

std::string power_law_table(const PowerLawTable& table) {
  std::ostringstream out;
  out << "fidelity  A  a  b  c\n";
  for (const auto& e : table.entries) {
    out << "f_" << e.pauli.str() << "  " << format_uncertainty(e.amplitude, e.amplitude_err) << "  "
        << format_uncertainty(e.a, e.a_err) << "  " << format_uncertainty(e.b, e.b_err) << "  "
        << format_uncertainty(e.c, e.c_err) << '\n';
  }
  return out.str();
}

std::string decay_curve_csv(const DecayFitResult& fit) {
  std::ostringstream out;
  out << "pauli,x,m,mean,std,count,prediction\n";
  char buf[160];
  for (std::size_t i = 0; i < fit.cells.size(); ++i) {
    const auto& c = fit.cells[i];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.17g,%.17g,%d,%.17g\n", c.pauli.str().c_str(), c.x,
                  c.m, c.mean, c.stddev, c.count, fit.predictions[static_cast<Eigen::Index>(i)]);
    out << buf;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Heatmaps

namespace {

Heatmap heatmap_from_fidelities(int x, int k, const std::map<PauliString, double>& per_cycle) {
  std::map<PauliString, double> f = per_cycle;
  f[PauliString(k)] = 1.0;
  if (f.size() != pauli_count(k)) {
    throw ConfigError("heatmap: fidelities of all " + std::to_string(pauli_count(k) - 1) +
                      " non-identity Paulis on the measured qubits are required");
  }
  const auto e = walsh_hadamard(f);
  Heatmap h{x, Eigen::MatrixXd::Zero(3, k)};
  for (const auto& [p, prob] : e) {
    for (int q = 0; q < k; ++q) {
      const char c = p.at(q);
      if (c == 'X') h.probabilities(0, q) += prob;
      if (c == 'Y') h.probabilities(1, q) += prob;
      if (c == 'Z') h.probabilities(2, q) += prob;
    }
  }
  return h;
}

}  // namespace

std::vector<Heatmap> heatmaps_from_fit(const DecayFitResult& fit, const std::vector<int>& x_values) {
  const auto& paulis = fit.model.paulis();
  if (paulis.empty()) throw ConfigError("heatmap: empty fit");
  const int k = paulis.front().num_qubits();
  std::vector<Heatmap> out;
  for (int x : x_values) {
    std::map<PauliString, double> f;
    for (int i = 0; i < fit.model.size(); ++i) {
      f[paulis[static_cast<std::size_t>(i)]] = 1.0 - fit.model.decay_rate(fit.parameters, i, x);
    }
    out.push_back(heatmap_from_fidelities(x, k, f));
  }
  return out;
}

std::vector<Heatmap> heatmaps_from_data(const DecayData& data) {
  const int k = data.paulis.front().num_qubits();
  std::vector<Heatmap> out;
  for (std::size_t xi = 0; xi < data.x_values.size(); ++xi) {
    std::map<PauliString, double> f;
    for (std::size_t pi = 0; pi < data.paulis.size(); ++pi) {
      double sm = 0, sl = 0, smm = 0, sml = 0;
      int n = 0;
      for (std::size_t mi = 0; mi < data.m_values.size(); ++mi) {
        const auto& c = data.cell(pi, xi, mi);
        if (c.mean <= 0.05) continue;
        const double l = std::log(c.mean);
        sm += c.m;
        sl += l;
        smm += static_cast<double>(c.m) * c.m;
        sml += c.m * l;
        ++n;
      }
      if (n < 2) {
        throw ConfigError("heatmap: too few usable m points for " + data.paulis[pi].str() +
                          " at x = " + std::to_string(data.x_values[xi]));
      }
      const double slope = (n * sml - sm * sl) / (n * smm - sm * sm);
      f[data.paulis[pi]] = std::exp(slope);
    }
    out.push_back(heatmap_from_fidelities(data.x_values[xi], k, f));
  }
  return out;
}

std::string heatmap_csv(const Heatmap& map) {
  std::ostringstream out;
  out << "pauli";
  for (Eigen::Index q = 0; q < map.probabilities.cols(); ++q) out << ",q" << q;
  out << '\n';
  const char* rows[] = {"X", "Y", "Z"};
  char buf[48];
  for (Eigen::Index r = 0; r < 3; ++r) {
    out << rows[r];
    for (Eigen::Index q = 0; q < map.probabilities.cols(); ++q) {
      std::snprintf(buf, sizeof(buf), ",%.17g", map.probabilities(r, q));
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace cerfold
