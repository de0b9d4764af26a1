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

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cerfold/channel.hpp"
#include "cerfold/pauli.hpp"

namespace cerfold {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: value number `counter` of the stream keyed by `key`.
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) {
  return splitmix64(splitmix64(key) ^ splitmix64(counter ^ 0xD1B54A32D192ED03ULL));
}

/// Measurement setting on the measured qubits: one of X, Y, Z per qubit.
/// The basis Paulis are all non-identity sub-products of the setting,
/// written as marginal strings over the measured qubits.
struct SpamBasis {
  std::string label;
  std::vector<PauliString> paulis;

  /// Throws ConfigError on characters outside {X, Y, Z}.
  static SpamBasis from_label(const std::string& label);
  PauliString setting() const { return PauliString::parse(label); }
};

/// One randomized circuit of the folded protocol.
struct CircuitSpec {
  int x = 1;
  int m = 1;
  SpamBasis basis;
  std::uint64_t seed = 0;
  int replicate = 0;
  std::shared_ptr<const HardCycle> cycle;
  /// Global qubits read out, each inside the cycle support; the i-th entry
  /// is character i of every marginal Pauli string.
  std::vector<int> measured;
};

/// Ideal layer sequence G_0, C^x, G_1, ..., C^x, G_m plus its Pauli frame.
/// Paulis are written on the cycle support.
struct CompiledCircuit {
  CircuitSpec spec;
  std::vector<SignedPauli> easy_cycles;  // m + 1 layers
  SignedPauli net_frame;                 // product of all ideal layers
  std::vector<PauliString> measured_paulis;
  std::vector<int> measured_positions;   // positions inside the support
};

/// Throws ConfigError for non-Clifford cycles, x != 1 (mod cyclicity), m < 1,
/// or when C^{x m} is not proportional to a Pauli (the final Pauli frame would
/// not exist).
CompiledCircuit generate(const CircuitSpec& spec);

/// Test hook: same as generate with caller-supplied easy layers.
CompiledCircuit generate_with_layers(const CircuitSpec& spec, std::vector<SignedPauli> layers);

/// Uniform Pauli on w qubits for layer `layer` of stream `seed`.
PauliString random_pauli(int num_qubits, std::uint64_t seed, std::uint64_t layer);

/// Marginal Pauli (over the measured qubits) embedded on the cycle support.
PauliString embed_marginal(const PauliString& marginal, const std::vector<int>& positions, int w);

/// Outcome weights over bitstrings of the measured qubits; bit i of the
/// index is measured qubit i. Weights are counts or exact probabilities.
struct OutcomeHistogram {
  int num_bits = 0;
  std::vector<double> counts;

  double total() const;
};

/// Frame-corrected expectation of P; P must be one of the basis Paulis.
double estimate_circuit_fidelity(const OutcomeHistogram& counts, const CompiledCircuit& circuit,
                                 const PauliString& p);

/// Factorial grid in the order x, m, basis, replicate. Seeds hash
/// (master_seed, x, m, basis index, replicate).
std::vector<CircuitSpec> experiment_plan(const std::vector<int>& x_values,
                                         const std::vector<int>& m_values, int n_randomizations,
                                         const std::vector<std::string>& bases,
                                         std::uint64_t master_seed,
                                         std::shared_ptr<const HardCycle> cycle,
                                         const std::vector<int>& measured);

/// Plan file contents.
struct ExperimentPlan {
  std::vector<int> x_values;
  std::vector<int> m_values;
  int randomizations = 1;
  std::vector<std::string> bases;
  std::uint64_t master_seed = 0;
  std::int64_t shots = 1000;
  std::vector<int> cycle_support;
  std::vector<GateSpec> cycle_gates;
  std::vector<int> measured;

  std::shared_ptr<const HardCycle> make_cycle() const;
  std::vector<CircuitSpec> specs() const;
};

/// Plan JSON: {"x", "m", "randomizations", "bases", "master_seed", "shots",
/// "measured", "cycle": {"support", "gates": [{"name", "qubits"}]}}.
/// "measured" defaults to [0] and the cycle to the identity on "measured".
ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan load_plan(const std::string& path);
std::string plan_to_json(const ExperimentPlan& plan);

}  // namespace cerfold
