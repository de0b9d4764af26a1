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

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cerfold/lindblad.hpp"
#include "cerfold/pauli.hpp"
#include "cerfold/superoperator.hpp"

namespace cerfold {

/// exp(A) by scaling and squaring with a truncated Taylor series. The series
/// is cut once a term drops below `tol` relative to the partial sum.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm_taylor(
    const Eigen::MatrixBase<Derived>& a, double tol = 1e-16) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  eigen_assert(a.rows() == a.cols());
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Mat scaled = a / static_cast<Scalar>(std::ldexp(1.0, squarings));

  Mat sum = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k < 64; ++k) {
    term = (term * scaled) / static_cast<Scalar>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= tol * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// e^{t Lambda}. Throws std::invalid_argument for t < 0 or a channel input
/// and NumericalIntegrityError if the result is not trace preserving.
Superoperator exponentiate(const Superoperator& generator, double t = 1.0);

/// a after b (a * b); both on the same support.
Superoperator compose(const Superoperator& a, const Superoperator& b);

Superoperator identity_channel(std::span<const int> support);

/// Diagonal entry tr(P E[P]) / 2^w; P is written on the local support
/// (P.num_qubits() == w).
double pauli_fidelity(const Superoperator& channel, const PauliString& p);
/// Same for a Pauli on the full register; throws if P acts off-support.
double pauli_fidelity_global(const Superoperator& channel, const PauliString& p);

/// Pauli-transfer matrix of a unitary, R(Q, P) = tr(Q U P U^dagger) / 2^w.
Eigen::MatrixXd unitary_ptm(const Eigen::MatrixXcd& u);

struct GateSpec {
  std::string name;  // I X Y Z H S Sdg CNOT CZ SWAP
  std::vector<int> qubits;
};

/// Ideal hard cycle on an ordered global support.
class HardCycle {
 public:
  HardCycle() = default;
  /// Throws ConfigError when `unitary` is not unitary or the cyclicity
  /// exceeds kMaxCyclicity.
  HardCycle(std::vector<int> support, Eigen::MatrixXcd unitary);

  /// Gate list in time order; gate qubits are global indices inside support.
  static HardCycle from_gates(std::vector<int> support, const std::vector<GateSpec>& gates);

  static constexpr int kMaxCyclicity = 24;

  const std::vector<int>& support() const { return support_; }
  int num_qubits() const { return static_cast<int>(support_.size()); }
  const Eigen::MatrixXcd& unitary() const { return unitary_; }
  const Superoperator& ptm() const { return ptm_; }
  int cyclicity() const { return cyclicity_; }
  bool is_clifford() const { return clifford_; }
  const std::vector<GateSpec>& gates() const { return gates_; }

  /// C P C^dagger for a local signed Pauli. Requires a Clifford cycle.
  SignedPauli conjugate(const SignedPauli& p) const;
  /// C^k P C^-k, k >= 0.
  SignedPauli conjugate_power(const SignedPauli& p, int k) const;
  /// C^k as a signed Pauli when it is proportional to one; `ok` reports it.
  SignedPauli power_as_pauli(int k, bool& ok) const;

 private:
  std::vector<int> support_;
  Eigen::MatrixXcd unitary_;
  Superoperator ptm_;
  int cyclicity_ = 1;
  bool clifford_ = false;
  std::vector<GateSpec> gates_;
  // Clifford table: column P of the PTM has a single +-1 at image_[P].
  std::vector<std::size_t> image_;
  std::vector<int> image_sign_;
};

/// Dense 2^w unitary of a named gate list on an ordered support.
Eigen::MatrixXcd gate_list_unitary(std::span<const int> support, const std::vector<GateSpec>& gates);

/// C^-1 (C E)^x: the x-folded noisy cycle referred back to one ideal
/// application. Requires x >= 1 and x = 1 (mod cyclicity).
Superoperator fold_with_cycle(const Superoperator& error, const HardCycle& cycle, int x);

/// Keeps only the PTM diagonal.
Superoperator twirl(const Superoperator& channel);

/// 1 - (2 sum_{Q~P} h_Q^2) x^2 - (2 sum_{j, Q~P} |l_{j,Q}|^2) x with Q~P
/// meaning Q anticommutes with P. P is on the model's register.
double predicted_fidelity(const NoiseModel& model, const PauliString& p, double x);

/// x^2 h_P^2 + x sum_j |l_{j,P}|^2.
double predicted_error_prob(const NoiseModel& model, const PauliString& p, double x);

}  // namespace cerfold
