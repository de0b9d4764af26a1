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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "../random_models.hpp"
#include "cerfold/channel.hpp"
#include "cerfold/fitdecay.hpp"
#include "cerfold/lindblad.hpp"
#include "cerfold/oracle.hpp"
#include "cerfold/pauli.hpp"
#include "cerfold/protocol.hpp"
#include "cerfold/report.hpp"
#include "cerfold/simulate.hpp"

namespace {

using namespace cerfold;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

PauliString P(const char* s) { return PauliString::parse(s); }

const std::vector<int> kX = {1, 3, 5, 7, 9};
const std::vector<int> kM = {4, 8, 12, 16, 32};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// Ancilla-next-to-CNOT pipeline shared by criteria 1, 6 and 8.
struct Pipeline {
  std::vector<FidelityRecord> records;
  DecayFitResult fit;
  bool ready = false;
};

std::vector<FidelityRecord> simulate_ancilla(int n_workers) {
  const NoiseModel noise = load_noise_model(CERFOLD_CONFIG_DIR "/ancilla_noise.json");
  const ExperimentPlan plan = load_plan(CERFOLD_CONFIG_DIR "/ancilla_plan.json");
  const SpamError spam = load_spam(CERFOLD_CONFIG_DIR "/spam.json", noise.num_qubits());
  return run_plan(plan.specs(), noise, spam, plan.shots, SimulationMode::kSampled, n_workers);
}

Pipeline& ancilla() {
  static Pipeline p;
  if (!p.ready) {
    p.records = simulate_ancilla(workers());
    p.fit = fit(p.records);
    p.ready = true;
  }
  return p;
}

Outcome ac1() {
  const Pipeline& p = ancilla();
  const ErrorBudget b = budget(p.fit);
  const PowerLawTable t = power_law_from_fit(p.fit);
  const BudgetEntry& z = b.at(P("Z"));
  const PowerLawEntry& pz = t.at(P("Z"));
  const bool ok = z.coherent >= 0.0016 && z.coherent <= 0.0022 && pz.b >= 0.0021 && pz.b <= 0.0027;
  return {ok, fmt("coherent_Z = %s in [0.0016, 0.0022], b_Z = %s in [0.0021, 0.0027], "
                  "%zu records, chi2/dof = %.3g",
                  format_uncertainty(z.coherent, z.coherent_err).c_str(),
                  format_uncertainty(pz.b, pz.b_err).c_str(), p.records.size(), p.fit.reduced_chi2)};
}

Outcome ac2() {
  std::mt19937_64 rng(20260202);
  int checked = 0, failed = 0, above_roundoff = 0;
  std::string first;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 2;
    const NoiseModel m = cerfold::testing::random_model(rng, n, 0.01);
    for (const auto& p : all_paulis(n)) {
      if (p.is_identity()) continue;
      for (int x = 1; x <= 10; ++x) {
        const double exact = exact_repeated_fidelity(m, p, x);
        const double err = std::abs(predicted_fidelity(m, p, x) - exact);
        const double bound = 5.0 * (1.0 - exact) * (1.0 - exact);
        ++checked;
        if (err > bound) {
          ++failed;
          if (err > 1e-14) ++above_roundoff;
          if (first.empty()) {
            first = fmt("first violation: model %d, %s, x = %d, |err| = %.3g > bound %.3g", trial,
                        p.str().c_str(), x, err, bound);
          }
        }
      }
    }
  }
  return {failed == 0,
          fmt("%d of %d (model, P, x) cases within 5(1-f)^2; %d violations exceed 1e-14; %s",
              checked - failed, checked, above_roundoff,
              failed == 0 ? "no violations" : first.c_str())};
}

// Exact twirled-mean data for a single X-gate cycle under one error.
DecayFitResult fold_fit(const NoiseModel& m) {
  const auto cycle = std::make_shared<const HardCycle>(HardCycle::from_gates({0}, {{"X", {0}}}));
  const auto specs = experiment_plan(kX, kM, 1, {"X", "Y", "Z"}, 3, cycle, {0});
  return fit(run_plan(specs, m, SpamError::none(1), 0, SimulationMode::kTwirledMean));
}

Outcome ac3() {
  const ConnectivityGraph g = ConnectivityGraph::line(1);
  const DecayFitResult anti = fold_fit(NoiseModel(g, {{P("Z"), 0.02}}, {}, 1));
  const DecayFitResult comm = fold_fit(NoiseModel(g, {{P("X"), 0.02}}, {}, 1));
  double anti_quad = 0.0;
  for (const auto& p : anti.model.paulis()) anti_quad = std::max(anti_quad, anti.quad(p));
  const double half = comm.quad(P("X")) / 2.0;
  const bool ok = anti_quad <= 1e-5 && std::abs(half - 4e-4) <= 0.25 * 4e-4;
  return {ok, fmt("h_Z: max quad = %.3g <= 1e-5; h_X: quad_X/2 = %.4g (target 4e-4 +- 25%%)",
                  anti_quad, half)};
}

Outcome ac4() {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_round = 0.0;
  for (int w = 1; w <= 3; ++w) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(pauli_count(w)));
    for (int rep = 0; rep < 20; ++rep) {
      for (Eigen::Index k = 0; k < f.size(); ++k) f[k] = u(rng);
      const Eigen::VectorXd back = inverse_walsh_hadamard(walsh_hadamard(f, w), w);
      const Eigen::VectorXd twice = walsh_hadamard(walsh_hadamard(f, w), w) * std::pow(4.0, w);
      worst_round = std::max({worst_round, (back - f).cwiseAbs().maxCoeff(),
                              (twice - f).cwiseAbs().maxCoeff()});
    }
  }
  double worst_neg = 0.0, worst_norm = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const NoiseModel m = cerfold::testing::random_model(rng, n, 0.05);
    const Superoperator t = twirl(exponentiate(build_generator(m)));
    std::map<PauliString, double> fid;
    for (const auto& p : all_paulis(n)) fid[p] = pauli_fidelity(t, p);
    double sum = 0.0;
    for (const auto& [p, prob] : walsh_hadamard(fid)) {
      worst_neg = std::max(worst_neg, -prob);
      sum += prob;
    }
    worst_norm = std::max(worst_norm, std::abs(sum - 1.0));
  }
  const bool ok = worst_round <= 1e-12 && worst_neg <= 1e-12 && worst_norm <= 1e-12;
  return {ok, fmt("round-trip max error %.2g; twirled probabilities min %.2g, |sum - 1| max %.2g "
                  "(100 models)",
                  worst_round, -worst_neg, worst_norm)};
}

Outcome ac5() {
  const std::vector<PauliString> paulis = {P("X"), P("Y"), P("Z")};
  const DecayModel model(paulis);
  Eigen::VectorXd truth(12);
  truth << 1.0, 0.98, 0.99, 0.0005, 0.0, 0.002, 0.001, 0.003, 0.004, 0.0002, 0.0001, 0.0;
  auto records = [&](double noise, int reps) {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<FidelityRecord> out;
    for (int i = 0; i < 3; ++i) {
      for (int x : kX) {
        for (int m : kM) {
          for (int k = 0; k < reps; ++k) {
            out.push_back({paulis[static_cast<std::size_t>(i)], x, m, 0,
                           model.predict(truth, i, x, m) + noise * g(rng), 0});
          }
        }
      }
    }
    return out;
  };

  const double recovery = (fit(records(0.0, 1), paulis).parameters - truth).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(56);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double jac = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd p(12);
    for (Eigen::Index k = 0; k < 12; ++k) p[k] = k < 3 ? 0.9 + 0.2 * u(rng) : 0.003 * u(rng);
    const int i = trial % 3;
    const double x = kX[static_cast<std::size_t>(trial % 5)], m = kM[static_cast<std::size_t>(trial / 5 % 5)];
    const Eigen::RowVectorXd g = model.gradient(p, i, x, m);
    for (Eigen::Index k = 0; k < 12; ++k) {
      if (g[k] == 0.0) continue;
      const double h = 1e-7 * std::max(1e-3, std::abs(p[k]));
      Eigen::VectorXd a = p, b = p;
      a[k] += h;
      b[k] -= h;
      const double fd = (model.predict(a, i, x, m) - model.predict(b, i, x, m)) / (2 * h);
      jac = std::max(jac, std::abs(g[k] - fd) / std::abs(fd));
    }
  }

  // quad_Z and lin_Z free, the rest fixed at the truth.
  const DecayData data = aggregate(records(0.01, 3), paulis);
  FitOptions o;
  o.initial = truth;
  for (Eigen::Index k = 0; k < 12; ++k) {
    if (k != 5 && k != 8) o.fixed.push_back(k);
  }
  const DecayFitResult r = fit(data, model, o);
  Eigen::VectorXd res;
  const GridSearchResult g = grid_search_2d(
      [&](double a, double b) {
        Eigen::VectorXd p = truth;
        p[5] = a;
        p[8] = b;
        decay_residuals(data, model, p, res, nullptr);
        return res.squaredNorm();
      },
      0.0, 0.006, 0.0, 0.012, 401);
  const double da = std::abs(r.parameters[5] - g.a) / g.cell_a;
  const double db = std::abs(r.parameters[8] - g.b) / g.cell_b;

  const bool ok = recovery <= 1e-6 && jac <= 1e-4 && da <= 1.0 && db <= 1.0;
  return {ok, fmt("exact-data max error %.2g <= 1e-6; Jacobian max rel error %.2g <= 1e-4; "
                  "grid offset (%.2f, %.2f) cells <= 1",
                  recovery, jac, da, db)};
}

Outcome ac6() {
  const BudgetEntry& z = budget(ancilla().fit).at(P("Z"));
  const double ratio = z.other_err / z.difference_err;
  const bool ok = z.correlation <= -0.9 && ratio <= 0.5;
  return {ok, fmt("corr(lin_Z, cst_Z) = %.4f <= -0.9; std(lin+cst)/std(lin-cst) = %.4f <= 0.5",
                  z.correlation, ratio)};
}

Outcome ac7() {
  const struct {
    double value, sigma;
    const char* text;
  } cases[] = {{0.00081, 0.00009, "0.00081(9)"}, {1.0012, 0.021, "1.00(2)"},
               {0.0019, 0.0001, "0.0019(1)"},    {0.0024, 0.0001, "0.0024(1)"},
               {0.00001, 0.00008, "0.00001(8)"}, {-0.0003, 0.0013, "0.000(1)"},
               {0.99996, 0.00081, "1.0000(8)"},  {0.0037, 0.0009, "0.0037(9)"}};
  int bad = 0;
  std::string first;
  for (const auto& c : cases) {
    const std::string got = format_uncertainty(c.value, c.sigma);
    const Measurement back = parse_uncertainty(c.text);
    if (got != c.text || format_uncertainty(back.value, back.sigma) != c.text) {
      if (first.empty()) first = got + " != " + c.text;
      ++bad;
    }
  }
  return {bad == 0, bad == 0 ? "hardware-table fixtures render; hardware rows themselves are not "
                               "reproducible without devices"
                             : "mismatch: " + first};
}

Outcome ac8() {
  const std::string base = records_to_csv(ancilla().records);
  bool ok = true;
  for (int w : {1, 2, 4, 8}) ok = ok && records_to_csv(simulate_ancilla(w)) == base;
  return {ok, fmt("records CSV (%zu bytes) %s for workers 1, 2, 4, 8 and %d", base.size(),
                  ok ? "identical" : "differs", workers())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s  %s  [%.1fs]\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
