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
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cerfold/channel.hpp"
#include "cerfold/lindblad.hpp"
#include "cerfold/protocol.hpp"

namespace cerfold {

/// Per-qubit preparation and symmetric readout flip probabilities, indexed
/// by global qubit.
struct SpamError {
  std::vector<double> prep;
  std::vector<double> readout;

  static SpamError none(int num_qubits);
  /// Throws ConfigError unless both vectors have `num_qubits` entries in [0, 1/2).
  void validate(int num_qubits) const;
};

/// {"prep": p or [p0, p1, ...], "readout": p or [...]}; scalars broadcast.
SpamError parse_spam(const std::string& json_text, int num_qubits);
SpamError load_spam(const std::string& path, int num_qubits);

/// One estimated circuit fidelity. `pauli` is the marginal string over the
/// measured qubits. shots = 0 marks an exact expectation.
struct FidelityRecord {
  PauliString pauli;
  int x = 1;
  int m = 1;
  std::uint64_t seed = 0;
  double estimate = 0.0;
  std::int64_t shots = 0;

  friend bool operator==(const FidelityRecord&, const FidelityRecord&) = default;
};

enum class SimulationMode {
  kSampled,      // multinomial shots per random circuit
  kExact,        // exact expectation of each random circuit
  kTwirledMean,  // exact average over all Pauli randomizations
};

/// Pauli-transfer-matrix simulator for one hard cycle under a noise model.
/// Noise outside the cycle support is dropped (see dropped_terms()).
class Simulator {
 public:
  Simulator(const NoiseModel& noise, std::shared_ptr<const HardCycle> cycle,
            std::vector<int> measured, SpamError spam);

  const HardCycle& cycle() const { return *cycle_; }
  const Superoperator& error_channel() const { return error_; }
  const std::vector<std::string>& dropped_terms() const { return dropped_; }

  /// (C E)^x on the support; cached and thread safe.
  const Eigen::MatrixXd& noisy_step(int x) const;

  /// Exact outcome distribution of the measured bits (bit i = measured
  /// qubit i). Throws NumericalIntegrityError for entries outside
  /// [-1e-9, 1 + 1e-9].
  Eigen::VectorXd outcome_distribution(const CompiledCircuit& circuit) const;

  /// Sampled histogram; shots = 0 returns the exact distribution.
  OutcomeHistogram run(const CompiledCircuit& circuit, std::int64_t shots,
                       std::uint64_t rng_seed) const;

  /// Average of the frame-corrected estimate of P over every easy-layer
  /// choice, computed exactly.
  double twirled_mean(int x, int m, const SpamBasis& basis, const PauliString& p) const;

  /// Records of one spec, one per basis Pauli, in basis order.
  std::vector<FidelityRecord> records(const CircuitSpec& spec, std::int64_t shots,
                                      SimulationMode mode) const;

 private:
  Eigen::VectorXd prepared_state(const SpamBasis& basis) const;
  double readout_factor(const PauliString& marginal) const;
  void apply_layer(Eigen::VectorXd& v, const PauliString& layer) const;

  std::shared_ptr<const HardCycle> cycle_;
  std::vector<int> measured_;
  std::vector<int> positions_;
  SpamError spam_;
  Superoperator error_;
  std::vector<std::string> dropped_;
  std::vector<std::uint32_t> x_masks_;
  std::vector<std::uint32_t> z_masks_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::unique_ptr<Eigen::MatrixXd>> step_cache_;
};

/// Convenience wrapper building a Simulator for a single circuit.
OutcomeHistogram run(const CompiledCircuit& circuit, const NoiseModel& noise,
                     const SpamError& spam, std::int64_t shots, std::uint64_t rng_seed);

/// All records of a plan in plan order. Spec seeds fix every random choice,
/// so the output does not depend on `workers`.
std::vector<FidelityRecord> run_plan(const std::vector<CircuitSpec>& specs, const NoiseModel& noise,
                                     const SpamError& spam, std::int64_t shots,
                                     SimulationMode mode = SimulationMode::kSampled,
                                     int workers = 1);

/// CSV with header pauli,x,m,seed,estimate,shots. Estimates are written with
/// 17 significant digits so they read back bit-exactly.
void write_records_csv(std::ostream& out, const std::vector<FidelityRecord>& records);
std::string records_to_csv(const std::vector<FidelityRecord>& records);
/// Throws ConfigError naming the offending line.
std::vector<FidelityRecord> read_records_csv(std::istream& in);
std::vector<FidelityRecord> load_records_csv(const std::string& path);

}  // namespace cerfold
