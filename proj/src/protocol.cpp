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

#include "cerfold/protocol.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "cerfold/errors.hpp"

namespace cerfold {

SpamBasis SpamBasis::from_label(const std::string& label) {
  if (label.empty()) throw ConfigError("SPAM basis label is empty");
  for (char c : label) {
    if (c != 'X' && c != 'Y' && c != 'Z') {
      throw ConfigError("SPAM basis '" + label + "' may only contain X, Y, Z");
    }
  }
  SpamBasis b{label, {}};
  const PauliString s = PauliString::parse(label);
  const int k = s.num_qubits();
  for (std::uint32_t t = 1; t < (1u << k); ++t) {
    b.paulis.emplace_back(k, s.x_mask() & t, s.z_mask() & t);
  }
  std::sort(b.paulis.begin(), b.paulis.end());
  return b;
}

PauliString random_pauli(int num_qubits, std::uint64_t seed, std::uint64_t layer) {
  // 4^w divides 2^64, so the reduction is exactly uniform.
  const std::uint64_t h = counter_hash(seed, layer);
  return PauliString::from_index(num_qubits, static_cast<std::size_t>(h % pauli_count(num_qubits)));
}

PauliString embed_marginal(const PauliString& marginal, const std::vector<int>& positions, int w) {
  if (static_cast<std::size_t>(marginal.num_qubits()) != positions.size()) {
    throw std::invalid_argument("marginal Pauli " + marginal.str() + " does not match " +
                                std::to_string(positions.size()) + " measured qubits");
  }
  return globalize(marginal, positions, w);
}

namespace {

std::vector<int> measured_positions(const CircuitSpec& spec) {
  if (!spec.cycle) throw ConfigError("circuit spec has no hard cycle");
  if (spec.measured.empty()) throw ConfigError("circuit spec measures no qubit");
  const auto& support = spec.cycle->support();
  std::vector<int> pos;
  for (int q : spec.measured) {
    const auto it = std::find(support.begin(), support.end(), q);
    if (it == support.end()) {
      throw ConfigError("measured qubit " + std::to_string(q) + " is outside the cycle support");
    }
    const int p = static_cast<int>(it - support.begin());
    if (std::find(pos.begin(), pos.end(), p) != pos.end()) {
      throw ConfigError("measured qubit " + std::to_string(q) + " listed twice");
    }
    pos.push_back(p);
  }
  return pos;
}

void validate_spec(const CircuitSpec& spec) {
  if (!spec.cycle) throw ConfigError("circuit spec has no hard cycle");
  if (!spec.cycle->is_clifford()) {
    throw ConfigError("hard cycle is not Clifford; Pauli frames cannot be tracked");
  }
  if (spec.m < 1) throw ConfigError("m must be >= 1");
  if (spec.x < 1 || (spec.x - 1) % spec.cycle->cyclicity() != 0) {
    throw ConfigError("x = " + std::to_string(spec.x) + " violates x = 1 (mod " +
                      std::to_string(spec.cycle->cyclicity()) + ")");
  }
  if (spec.basis.label.size() != spec.measured.size()) {
    throw ConfigError("SPAM basis '" + spec.basis.label + "' does not match " +
                      std::to_string(spec.measured.size()) + " measured qubit(s)");
  }
}

}  // namespace

CompiledCircuit generate_with_layers(const CircuitSpec& spec, std::vector<SignedPauli> layers) {
  validate_spec(spec);
  const HardCycle& cycle = *spec.cycle;
  const int w = cycle.num_qubits();
  if (layers.size() != static_cast<std::size_t>(spec.m) + 1) {
    throw std::invalid_argument("generate: expected m + 1 easy layers");
  }
  for (const auto& l : layers) {
    if (l.pauli.num_qubits() != w) throw std::invalid_argument("easy layer has the wrong size");
  }

  bool ok = false;
  const SignedPauli residual = cycle.power_as_pauli(spec.x * spec.m, ok);
  if (!ok) {
    throw ConfigError("C^(x m) with x = " + std::to_string(spec.x) + ", m = " +
                      std::to_string(spec.m) + " is not a Pauli; choose m so that it is");
  }

  // U_k = F_k C^{x k}, F_{k+1} = G_{k+1} (C^x F_k C^-x).
  SignedPauli frame = layers.front();
  for (std::size_t k = 1; k < layers.size(); ++k) {
    frame = multiply(layers[k], cycle.conjugate_power(frame, spec.x));
  }

  CompiledCircuit out;
  out.spec = spec;
  out.easy_cycles = std::move(layers);
  out.net_frame = multiply(frame, residual);
  out.measured_paulis = spec.basis.paulis;
  out.measured_positions = measured_positions(spec);
  return out;
}

CompiledCircuit generate(const CircuitSpec& spec) {
  validate_spec(spec);
  const int w = spec.cycle->num_qubits();
  std::vector<SignedPauli> layers;
  layers.reserve(static_cast<std::size_t>(spec.m) + 1);
  for (int k = 0; k <= spec.m; ++k) {
    layers.push_back({random_pauli(w, spec.seed, static_cast<std::uint64_t>(k)), 0});
  }
  return generate_with_layers(spec, std::move(layers));
}

double OutcomeHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

double estimate_circuit_fidelity(const OutcomeHistogram& counts, const CompiledCircuit& circuit,
                                 const PauliString& p) {
  if (std::find(circuit.measured_paulis.begin(), circuit.measured_paulis.end(), p) ==
      circuit.measured_paulis.end()) {
    throw std::invalid_argument("Pauli " + p.str() + " is not in SPAM basis " +
                                circuit.spec.basis.label);
  }
  const double total = counts.total();
  if (counts.counts.empty() || !(total > 0.0)) {
    throw std::invalid_argument("estimate_circuit_fidelity: empty outcome histogram");
  }
  if (counts.num_bits != p.num_qubits() ||
      counts.counts.size() != (std::size_t{1} << counts.num_bits)) {
    throw std::invalid_argument("estimate_circuit_fidelity: histogram size mismatch");
  }
  const int w = circuit.spec.cycle->num_qubits();
  const PauliString local = embed_marginal(p, circuit.measured_positions, w);
  const double sign = commutes(circuit.net_frame.pauli, local);
  const std::uint32_t mask = p.support_mask();
  double acc = 0.0;
  for (std::size_t b = 0; b < counts.counts.size(); ++b) {
    const double parity = (std::popcount(static_cast<std::uint32_t>(b) & mask) & 1) ? -1.0 : 1.0;
    acc += parity * counts.counts[b];
  }
  return std::clamp(sign * acc / total, -1.0, 1.0);
}

std::vector<CircuitSpec> experiment_plan(const std::vector<int>& x_values,
                                         const std::vector<int>& m_values, int n_randomizations,
                                         const std::vector<std::string>& bases,
                                         std::uint64_t master_seed,
                                         std::shared_ptr<const HardCycle> cycle,
                                         const std::vector<int>& measured) {
  if (!cycle) throw ConfigError("experiment plan has no hard cycle");
  if (n_randomizations < 1) throw ConfigError("randomizations must be >= 1");
  std::vector<SpamBasis> parsed;
  for (const auto& b : bases) parsed.push_back(SpamBasis::from_label(b));
  for (int x : x_values) {
    if (x < 1 || (x - 1) % cycle->cyclicity() != 0) {
      throw ConfigError("x = " + std::to_string(x) + " violates x = 1 (mod " +
                        std::to_string(cycle->cyclicity()) + ")");
    }
  }
  for (int m : m_values) {
    if (m < 1) throw ConfigError("m values must be >= 1");
  }

  std::vector<CircuitSpec> specs;
  specs.reserve(x_values.size() * m_values.size() * parsed.size() *
                static_cast<std::size_t>(n_randomizations));
  for (int x : x_values) {
    for (int m : m_values) {
      for (std::size_t b = 0; b < parsed.size(); ++b) {
        for (int r = 0; r < n_randomizations; ++r) {
          std::uint64_t h = splitmix64(master_seed);
          h = counter_hash(h, static_cast<std::uint64_t>(x));
          h = counter_hash(h, static_cast<std::uint64_t>(m));
          h = counter_hash(h, static_cast<std::uint64_t>(b));
          h = counter_hash(h, static_cast<std::uint64_t>(r));
          specs.push_back(CircuitSpec{x, m, parsed[b], h, r, cycle, measured});
        }
      }
    }
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Plan files

std::shared_ptr<const HardCycle> ExperimentPlan::make_cycle() const {
  return std::make_shared<const HardCycle>(HardCycle::from_gates(cycle_support, cycle_gates));
}

std::vector<CircuitSpec> ExperimentPlan::specs() const {
  return experiment_plan(x_values, m_values, randomizations, bases, master_seed, make_cycle(),
                         measured);
}

namespace {

using nlohmann::json;

template <typename T>
T plan_get(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.contains(key)) throw ConfigError("plan: missing key '" + path + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("plan: key '" + path + key + "' has the wrong type (" + e.what() + ")");
  }
}

}  // namespace

ExperimentPlan parse_plan(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("plan: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("plan: top level must be an object");
  ExperimentPlan plan;
  plan.x_values = plan_get<std::vector<int>>(doc, "x", "");
  plan.m_values = plan_get<std::vector<int>>(doc, "m", "");
  plan.randomizations = plan_get<int>(doc, "randomizations", "");
  plan.bases = plan_get<std::vector<std::string>>(doc, "bases", "");
  plan.master_seed = plan_get<std::uint64_t>(doc, "master_seed", "");
  if (doc.contains("shots")) plan.shots = plan_get<std::int64_t>(doc, "shots", "");
  plan.measured = doc.contains("measured") ? plan_get<std::vector<int>>(doc, "measured", "")
                                           : std::vector<int>{0};
  if (doc.contains("cycle")) {
    const auto& c = doc.at("cycle");
    if (!c.is_object()) throw ConfigError("plan: key 'cycle' must be an object");
    plan.cycle_support = plan_get<std::vector<int>>(c, "support", "cycle.");
    if (c.contains("gates")) {
      const auto& g = c.at("gates");
      if (!g.is_array()) throw ConfigError("plan: key 'cycle.gates' must be an array");
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string path = "cycle.gates[" + std::to_string(i) + "].";
        plan.cycle_gates.push_back({plan_get<std::string>(g[i], "name", path),
                                    plan_get<std::vector<int>>(g[i], "qubits", path)});
      }
    }
  } else {
    plan.cycle_support = plan.measured;
  }
  if (plan.x_values.empty() || plan.m_values.empty() || plan.bases.empty()) {
    throw ConfigError("plan: 'x', 'm' and 'bases' must be non-empty");
  }
  if (plan.shots < 0) throw ConfigError("plan: key 'shots' must be >= 0");
  for (const auto& b : plan.bases) SpamBasis::from_label(b);
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_plan(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json doc;
  doc["x"] = plan.x_values;
  doc["m"] = plan.m_values;
  doc["randomizations"] = plan.randomizations;
  doc["bases"] = plan.bases;
  doc["master_seed"] = plan.master_seed;
  doc["shots"] = plan.shots;
  doc["measured"] = plan.measured;
  json gates = json::array();
  for (const auto& g : plan.cycle_gates) gates.push_back({{"name", g.name}, {"qubits", g.qubits}});
  doc["cycle"] = {{"support", plan.cycle_support}, {"gates", gates}};
  return doc.dump(2);
}

}  // namespace cerfold
