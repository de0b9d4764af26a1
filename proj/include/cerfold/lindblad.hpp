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

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cerfold/pauli.hpp"
#include "cerfold/superoperator.hpp"

namespace cerfold {

/// h_P P in the effective Hamiltonian. Rates are per hard-cycle application.
struct HamiltonianTerm {
  PauliString pauli;
  double coefficient = 0.0;
};

struct JumpTerm {
  PauliString pauli;
  std::complex<double> coefficient;
};

/// Lindblad jump operator L_j = sum_P l_{j,P} P (traceless).
struct LindbladJump {
  int label = 0;
  std::vector<JumpTerm> terms;

  std::uint32_t support_mask() const;
  /// l_{j,P}; zero when P is absent.
  std::complex<double> coefficient(const PauliString& p) const;
};

/// Undirected qubit interaction graph.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  ConnectivityGraph(int num_qubits, std::vector<std::pair<int, int>> edges);

  static ConnectivityGraph line(int num_qubits);
  static ConnectivityGraph complete(int num_qubits);

  int num_qubits() const { return n_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  /// True if the vertex-induced subgraph on `vertices` is connected
  /// (the empty set counts as connected).
  bool is_connected(std::uint32_t vertices) const;

  /// Size of the smallest connected vertex set containing `support`
  /// (gaps allowed). Returns -1 when no connected superset exists.
  int area_of_effect(std::uint32_t support) const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::uint32_t> neighbours_;
};

/// Hamiltonian plus jump operators with a geometric locality constraint.
/// Duplicate Paulis are merged on construction; construction throws
/// ConfigError when a term violates the constraint.
class NoiseModel {
 public:
  NoiseModel() = default;
  NoiseModel(ConnectivityGraph graph, std::vector<HamiltonianTerm> hamiltonian,
             std::vector<LindbladJump> jumps, int locality_k);

  static NoiseModel empty(int num_qubits);

  int num_qubits() const { return graph_.num_qubits(); }
  const ConnectivityGraph& graph() const { return graph_; }
  const std::vector<HamiltonianTerm>& hamiltonian() const { return hamiltonian_; }
  const std::vector<LindbladJump>& jumps() const { return jumps_; }
  int locality_k() const { return locality_k_; }

  /// h_P; zero when P is absent.
  double hamiltonian_coefficient(const PauliString& p) const;
  /// Union of the supports of all terms.
  std::uint32_t support_mask() const;
  bool is_empty() const { return hamiltonian_.empty() && jumps_.empty(); }

  /// Terms removed by restrict(), formatted for diagnostics.
  const std::vector<std::string>& dropped_terms() const { return dropped_; }

 private:
  friend NoiseModel restrict(const NoiseModel& model, std::span<const int> support);

  ConnectivityGraph graph_;
  std::vector<HamiltonianTerm> hamiltonian_;
  std::vector<LindbladJump> jumps_;
  int locality_k_ = 1;
  std::vector<std::string> dropped_;
};

/// Amplitude damping L = sqrt(cycle/T1) (X + iY)/2 and pure dephasing
/// L = sqrt(gamma_phi / 2) Z with gamma_phi = cycle (1/T2 - 1/(2 T1)), so that
/// coherences decay as exp(-cycle/T2). Requires 0 < T2 <= 2 T1.
std::vector<LindbladJump> relaxation_jumps(int num_qubits, int qubit, double t1, double t2,
                                           double cycle_time, int first_label);

/// Generator in the Pauli basis on the ordered `support`. Every model term
/// must lie inside the support and the support may hold at most
/// kMaxSuperoperatorQubits qubits.
Superoperator build_generator(const NoiseModel& model, std::span<const int> support);
Superoperator build_generator(const NoiseModel& model);  // support = 0 .. n-1

/// t_{P->Q} = tr(Q Lambda[P]) / 2^n from the closed-form expressions in
/// terms of h and l coefficients. P and Q live on the model's n qubits.
double transition_amplitude(const NoiseModel& model, const PauliString& p, const PauliString& q);

/// Keeps the terms whose support lies inside `support`; records the rest
/// in dropped_terms(). Jumps left without terms are removed.
NoiseModel restrict(const NoiseModel& model, std::span<const int> support);

/// Re-expresses a global Pauli on the ordered local support. Throws
/// std::invalid_argument if the Pauli acts outside the support.
PauliString localize(const PauliString& global, std::span<const int> support);
/// Inverse of localize.
PauliString globalize(const PauliString& local, std::span<const int> support, int num_qubits);

/// Parses the noise-model JSON schema. Errors name the offending key.
NoiseModel parse_noise_model(const std::string& json_text);
NoiseModel load_noise_model(const std::string& path);
std::string noise_model_to_json(const NoiseModel& model);

}  // namespace cerfold
