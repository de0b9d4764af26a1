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

// cerfold command-line driver: simulate, fit, budget, oracle-check and
// heatmap-export.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cerfold/channel.hpp"
#include "cerfold/errors.hpp"
#include "cerfold/fitdecay.hpp"
#include "cerfold/lindblad.hpp"
#include "cerfold/oracle.hpp"
#include "cerfold/protocol.hpp"
#include "cerfold/report.hpp"
#include "cerfold/simulate.hpp"

#ifndef CERFOLD_VERSION
#define CERFOLD_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitConvergence = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cerfold::ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cerfold::ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw cerfold::ConfigError("write failed for '" + path.string() + "'");
}

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw cerfold::ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

cerfold::SimulationMode parse_mode(const std::string& mode) {
  if (mode == "sampled") return cerfold::SimulationMode::kSampled;
  if (mode == "exact") return cerfold::SimulationMode::kExact;
  if (mode == "twirled-mean") return cerfold::SimulationMode::kTwirledMean;
  throw cerfold::ConfigError("unknown mode '" + mode + "' (sampled, exact, twirled-mean)");
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string noise, plan, spam, out = "out", manifest, mode = "sampled";
  std::int64_t shots = -1;
  std::int64_t seed = -1;
  int workers = 1;
};

int cmd_simulate(const SimulateArgs& a) {
  std::string noise_text, plan_text, spam_text, mode_name = a.mode;
  std::int64_t shots = a.shots;
  std::int64_t seed = a.seed;
  if (!a.manifest.empty()) {
    json m;
    try {
      m = json::parse(read_file(a.manifest));
      noise_text = m.at("noise").at("content").get<std::string>();
      plan_text = m.at("plan").at("content").get<std::string>();
      spam_text = m.at("spam").at("content").get<std::string>();
      shots = m.at("shots").get<std::int64_t>();
      seed = static_cast<std::int64_t>(m.at("master_seed").get<std::uint64_t>());
      mode_name = m.at("mode").get<std::string>();
    } catch (const json::exception& e) {
      throw cerfold::ConfigError(a.manifest + ": malformed manifest (" + e.what() + ")");
    }
  } else {
    if (a.noise.empty() || a.plan.empty()) {
      throw cerfold::ConfigError("simulate needs --noise and --plan (or --manifest)");
    }
    noise_text = read_file(a.noise);
    plan_text = read_file(a.plan);
    spam_text = a.spam.empty() ? std::string("{}") : read_file(a.spam);
  }

  cerfold::NoiseModel noise;
  cerfold::ExperimentPlan plan;
  try {
    noise = cerfold::parse_noise_model(noise_text);
  } catch (const cerfold::ConfigError& e) {
    throw cerfold::ConfigError((a.noise.empty() ? a.manifest : a.noise) + ": " + e.what());
  }
  try {
    plan = cerfold::parse_plan(plan_text);
  } catch (const cerfold::ConfigError& e) {
    throw cerfold::ConfigError((a.plan.empty() ? a.manifest : a.plan) + ": " + e.what());
  }
  const cerfold::SpamError spam = cerfold::parse_spam(spam_text, noise.num_qubits());
  if (shots < 0) shots = plan.shots;
  if (seed >= 0) plan.master_seed = static_cast<std::uint64_t>(seed);
  const auto mode = parse_mode(mode_name);
  if (mode == cerfold::SimulationMode::kSampled && shots < 100) {
    throw cerfold::ConfigError("shots must be >= 100 (got " + std::to_string(shots) + ")");
  }

  const auto specs = plan.specs();
  cerfold::Simulator probe(noise, specs.front().cycle, plan.measured, spam);
  const auto records = cerfold::run_plan(specs, noise, spam, shots, mode, a.workers);
  const std::string csv = cerfold::records_to_csv(records);

  const fs::path out = prepare_out(a.out);
  write_file(out / "records.csv", csv);
  json manifest;
  manifest["tool"] = "cerfold";
  manifest["version"] = CERFOLD_VERSION;
  manifest["command"] = "simulate";
  manifest["mode"] = mode_name;
  manifest["shots"] = shots;
  manifest["master_seed"] = plan.master_seed;
  manifest["specs"] = specs.size();
  manifest["records"] = records.size();
  manifest["noise"] = {{"path", a.noise}, {"fnv1a", fnv1a(noise_text)}, {"content", noise_text}};
  manifest["plan"] = {{"path", a.plan}, {"fnv1a", fnv1a(plan_text)}, {"content", plan_text}};
  manifest["spam"] = {{"path", a.spam}, {"fnv1a", fnv1a(spam_text)}, {"content", spam_text}};
  manifest["records_fnv1a"] = fnv1a(csv);
  manifest["dropped_noise_terms"] = probe.dropped_terms();
  json seeds = json::array();
  for (const auto& s : specs) {
    seeds.push_back({{"x", s.x}, {"m", s.m}, {"basis", s.basis.label},
                     {"replicate", s.replicate}, {"seed", s.seed}});
  }
  manifest["spec_seeds"] = seeds;
  write_file(out / "manifest.json", manifest.dump(2));
  std::cout << "wrote " << records.size() << " records from " << specs.size() << " circuits to "
            << (out / "records.csv").string() << " (fnv1a " << fnv1a(csv) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit / budget

int cmd_fit(const std::string& records_path, const std::string& out_dir, bool power_law) {
  const auto records = cerfold::load_records_csv(records_path);
  const cerfold::DecayData data = cerfold::aggregate(records);
  const cerfold::DecayFitResult fit = cerfold::fit(data);
  const cerfold::ErrorBudget b = cerfold::budget(fit);
  const fs::path out = prepare_out(out_dir);
  write_file(out / "fit_report.json", cerfold::fit_report_json(fit));
  write_file(out / "budget.json", cerfold::budget_json(b));
  write_file(out / "decay_curve.csv", cerfold::decay_curve_csv(fit));
  const cerfold::PowerLawTable table =
      power_law ? cerfold::fit_power_law(data) : cerfold::power_law_from_fit(fit);
  write_file(out / "power_law.json", cerfold::power_law_json(table));
  std::printf("chi2 = %.6g  dof = %d  reduced = %.6g  status = %s  cells = %zu\n", fit.chi2,
              fit.dof, fit.reduced_chi2, cerfold::to_string(fit.status).c_str(), fit.cells.size());
  std::cout << cerfold::power_law_table(table) << '\n' << cerfold::budget_table(b);
  return 0;
}

int cmd_budget(const std::string& fit_path, const std::string& records_path,
               const std::string& out_dir) {
  cerfold::DecayFitResult fit;
  if (!fit_path.empty()) {
    fit = cerfold::parse_fit_report(read_file(fit_path));
  } else if (!records_path.empty()) {
    fit = cerfold::fit(cerfold::load_records_csv(records_path));
  } else {
    throw cerfold::ConfigError("budget needs --fit or --records");
  }
  const cerfold::ErrorBudget b = cerfold::budget(fit);
  if (!out_dir.empty()) write_file(prepare_out(out_dir) / "budget.json", cerfold::budget_json(b));
  std::cout << cerfold::budget_table(b);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle-check

int cmd_oracle_check(const std::string& noise_path, int max_x, const std::string& dump_dir) {
  const cerfold::NoiseModel model = cerfold::load_noise_model(noise_path);
  const int n = model.num_qubits();
  if (n > cerfold::kMaxOracleQubits) {
    throw cerfold::ConfigError("oracle-check supports at most " +
                               std::to_string(cerfold::kMaxOracleQubits) + " qubits");
  }
  const cerfold::Superoperator fast = cerfold::build_generator(model);
  const cerfold::Superoperator slow = cerfold::oracle_generator(model);
  const double gen_err = (fast.matrix - slow.matrix).cwiseAbs().maxCoeff();

  double amp_err = 0.0;
  const auto paulis = cerfold::all_paulis(n);
  for (const auto& p : paulis) {
    for (const auto& q : paulis) {
      amp_err = std::max(amp_err, std::abs(cerfold::transition_amplitude(model, p, q) - fast.entry(q, p)));
    }
  }
  std::printf("generator vs column-stacked oracle: max |diff| = %.3e\n", gen_err);
  std::printf("closed-form amplitudes vs generator: max |diff| = %.3e\n", amp_err);
  std::printf("%-8s %4s %14s %14s %12s %12s\n", "pauli", "x", "predicted", "exact", "|diff|",
              "5(1-f)^2");
  int violations = 0;
  for (const auto& p : paulis) {
    if (p.is_identity()) continue;
    for (int x = 1; x <= max_x; ++x) {
      const double pred = cerfold::predicted_fidelity(model, p, x);
      const double exact = cerfold::exact_repeated_fidelity(model, p, x);
      const double bound = 5.0 * (1.0 - exact) * (1.0 - exact);
      const bool ok = std::abs(pred - exact) <= bound;
      if (!ok) ++violations;
      std::printf("%-8s %4d %14.10f %14.10f %12.3e %12.3e%s\n", p.str().c_str(), x, pred, exact,
                  std::abs(pred - exact), bound, ok ? "" : "  *");
    }
  }
  std::printf("propagation bound violations: %d\n", violations);
  if (!dump_dir.empty()) {
    const fs::path out = prepare_out(dump_dir);
    std::ostringstream a, b, c;
    cerfold::write_matrix_csv(a, fast.matrix, n);
    cerfold::write_matrix_csv(b, slow.matrix, n);
    cerfold::write_matrix_csv(c, cerfold::exponentiate(fast).matrix, n);
    write_file(out / "generator.csv", a.str());
    write_file(out / "generator_oracle.csv", b.str());
    write_file(out / "channel.csv", c.str());
  }
  if (gen_err > 1e-10 || amp_err > 1e-10) {
    throw cerfold::NumericalIntegrityError("generator disagrees with the oracle");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// heatmap-export

int cmd_heatmap(const std::string& records_path, const std::string& fit_path,
                const std::string& out_dir, std::vector<int> xs) {
  std::vector<cerfold::Heatmap> maps;
  if (!fit_path.empty()) {
    const auto fit = cerfold::parse_fit_report(read_file(fit_path));
    if (xs.empty()) {
      for (const auto& c : fit.cells) {
        if (std::find(xs.begin(), xs.end(), c.x) == xs.end()) xs.push_back(c.x);
      }
    }
    maps = cerfold::heatmaps_from_fit(fit, xs);
  } else if (!records_path.empty()) {
    maps = cerfold::heatmaps_from_data(cerfold::aggregate(cerfold::load_records_csv(records_path)));
  } else {
    throw cerfold::ConfigError("heatmap-export needs --fit or --records");
  }
  const fs::path out = prepare_out(out_dir);
  for (const auto& m : maps) {
    const fs::path file = out / ("heatmap_x" + std::to_string(m.x) + ".csv");
    write_file(file, cerfold::heatmap_csv(m));
    std::cout << "wrote " << file.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cerfold: folded-cycle error reconstruction simulator and fitter"};
  app.set_version_flag("--version", std::string(CERFOLD_VERSION));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a plan and write records CSV + manifest");
  simulate->add_option("--noise", sim.noise, "Noise-model JSON");
  simulate->add_option("--plan", sim.plan, "Plan JSON");
  simulate->add_option("--spam", sim.spam, "SPAM-error JSON");
  simulate->add_option("--shots", sim.shots, "Shots per circuit (overrides the plan)");
  simulate->add_option("--seed", sim.seed, "Master seed (overrides the plan)");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--workers", sim.workers, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--mode", sim.mode, "sampled | exact | twirled-mean");
  simulate->add_option("--manifest", sim.manifest, "Replay a previous run's manifest");

  std::string fit_records, fit_out = "out";
  bool power_law = false;
  auto* fit = app.add_subcommand("fit", "Fit the decay model to a records CSV");
  fit->add_option("--records", fit_records, "Records CSV")->required();
  fit->add_option("--out", fit_out, "Output directory");
  fit->add_flag("--power-law", power_law, "Fit the per-fidelity power-law form independently");

  std::string budget_fit, budget_records, budget_out;
  auto* budget = app.add_subcommand("budget", "Coherent vs other error budget");
  budget->add_option("--fit", budget_fit, "Fit report JSON");
  budget->add_option("--records", budget_records, "Records CSV (fit first)");
  budget->add_option("--out", budget_out, "Output directory for budget.json");

  std::string oracle_noise, oracle_dump;
  int oracle_x = 10;
  auto* oracle = app.add_subcommand("oracle-check", "Compare fast paths with dense oracles");
  oracle->add_option("--noise", oracle_noise, "Noise-model JSON")->required();
  oracle->add_option("--x", oracle_x, "Largest repetition count")->check(CLI::PositiveNumber);
  oracle->add_option("--out", oracle_dump, "Directory for matrix CSV dumps");

  std::string heat_records, heat_fit, heat_out = "out";
  std::vector<int> heat_x;
  auto* heat = app.add_subcommand("heatmap-export", "Marginal error-probability matrices per x");
  heat->add_option("--records", heat_records, "Records CSV");
  heat->add_option("--fit", heat_fit, "Fit report JSON");
  heat->add_option("--x", heat_x, "Fold values (fit input only)");
  heat->add_option("--out", heat_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*fit) return cmd_fit(fit_records, fit_out, power_law);
    if (*budget) return cmd_budget(budget_fit, budget_records, budget_out);
    if (*oracle) return cmd_oracle_check(oracle_noise, oracle_x, oracle_dump);
    if (*heat) return cmd_heatmap(heat_records, heat_fit, heat_out, heat_x);
  } catch (const cerfold::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cerfold::NumericalIntegrityError& e) {
    std::cerr << "numerical integrity error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const cerfold::ConvergenceError& e) {
    std::cerr << "fit did not converge: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
