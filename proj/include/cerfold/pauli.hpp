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

#include <array>
#include <bit>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace cerfold {

/// Phase-free n-qubit Pauli operator in symplectic form.
///
/// Bit q of x_mask / z_mask describes qubit q: X -> x, Z -> z, Y -> both.
/// In text form the leftmost character is qubit 0.
///
/// Vector/matrix index convention (used by every module and by all file
/// interchange): each qubit contributes a base-4 digit I=0, X=1, Y=2, Z=3,
/// with qubit 0 the most significant digit. For one qubit the order is
/// (I, X, Y, Z); for two qubits it is II, IX, IY, IZ, XI, ... , ZZ.
class PauliString {
 public:
  static constexpr int kMaxQubits = 12;

  PauliString() = default;
  explicit PauliString(int num_qubits);
  PauliString(int num_qubits, std::uint32_t x_mask, std::uint32_t z_mask);

  /// Parses a string over {I, X, Y, Z}. Throws std::invalid_argument.
  static PauliString parse(std::string_view text);
  static PauliString from_index(int num_qubits, std::size_t index);
  /// Single-qubit Pauli ('I','X','Y','Z') acting on `qubit` of `num_qubits`.
  static PauliString single(int num_qubits, int qubit, char op);

  int num_qubits() const { return n_; }
  std::uint32_t x_mask() const { return x_; }
  std::uint32_t z_mask() const { return z_; }
  std::uint32_t support_mask() const { return x_ | z_; }
  int weight() const { return std::popcount(x_ | z_); }
  bool is_identity() const { return (x_ | z_) == 0; }
  char at(int qubit) const;

  std::size_t index() const;
  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.index() <=> b.index();
  }

 private:
  int n_ = 0;
  std::uint32_t x_ = 0;
  std::uint32_t z_ = 0;
};

/// Number of Paulis on w qubits (4^w).
constexpr std::size_t pauli_count(int num_qubits) { return std::size_t{1} << (2 * num_qubits); }

/// All 4^w Paulis in index order.
std::vector<PauliString> all_paulis(int num_qubits);

/// Symplectic sign of two masks: +1 when they commute.
inline int commutation_sign(std::uint32_t x1, std::uint32_t z1, std::uint32_t x2, std::uint32_t z2) {
  return (std::popcount((x1 & z2) ^ (z1 & x2)) & 1) ? -1 : 1;
}

/// chi_{P,Q}: +1 if P and Q commute, -1 if they anticommute.
int commutes(const PauliString& p, const PauliString& q);
inline bool anticommute(const PauliString& p, const PauliString& q) { return commutes(p, q) < 0; }

/// Pauli with a fourth-root-of-unity phase i^phase.
struct SignedPauli {
  PauliString pauli;
  int phase = 0;  // exponent k of i^k, always in [0, 4)

  std::complex<double> phase_value() const;
  std::string str() const;

  friend bool operator==(const SignedPauli&, const SignedPauli&) = default;
};

/// Phase exponent g such that P1 P2 = i^g P3 for the Hermitian Paulis
/// given by masks; P3 = (x1 ^ x2, z1 ^ z2).
int product_phase(std::uint32_t x1, std::uint32_t z1, std::uint32_t x2, std::uint32_t z2);

SignedPauli multiply(const SignedPauli& p, const SignedPauli& q);
inline SignedPauli multiply(const PauliString& p, const PauliString& q) {
  return multiply(SignedPauli{p, 0}, SignedPauli{q, 0});
}

/// Dense 2^w x 2^w matrix of a Pauli (qubit 0 is the most significant
/// tensor factor).
Eigen::MatrixXcd pauli_matrix(const PauliString& p);

/// Unnormalized +-1 commutation matrix W with W(Q, P) = chi_{P,Q}.
Eigen::MatrixXd commutation_matrix(int num_qubits);

namespace detail {
inline void check_full_pauli_vector(Eigen::Index size, int num_qubits) {
  if (num_qubits < 0 || num_qubits > PauliString::kMaxQubits ||
      static_cast<std::size_t>(size) != pauli_count(num_qubits)) {
    throw std::invalid_argument("walsh_hadamard: vector must cover all 4^w Paulis (w = " +
                                std::to_string(num_qubits) + ", got " + std::to_string(size) +
                                " entries)");
  }
}
}  // namespace detail

/// Unnormalized fast transform out(Q) = sum_P chi_{P,Q} in(P), O(w 4^w).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> commutation_transform(
    const Eigen::MatrixBase<Derived>& in, int num_qubits) {
  using Scalar = typename Derived::Scalar;
  detail::check_full_pauli_vector(in.size(), num_qubits);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = in;
  const Eigen::Index n = v.size();
  for (int q = 0; q < num_qubits; ++q) {
    const Eigen::Index stride = Eigen::Index{1} << (2 * (num_qubits - 1 - q));
    for (Eigen::Index base = 0; base < n; base += 4 * stride) {
      for (Eigen::Index k = 0; k < stride; ++k) {
        const Scalar i = v[base + k];
        const Scalar x = v[base + k + stride];
        const Scalar y = v[base + k + 2 * stride];
        const Scalar z = v[base + k + 3 * stride];
        v[base + k] = i + x + y + z;
        v[base + k + stride] = i + x - y - z;
        v[base + k + 2 * stride] = i - x + y - z;
        v[base + k + 3 * stride] = i - x - y + z;
      }
    }
  }
  return v;
}

/// Fidelity vector -> Pauli error-probability vector,
/// e(Q) = 4^-w sum_P chi_{P,Q} f(P).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> walsh_hadamard(
    const Eigen::MatrixBase<Derived>& fidelities, int num_qubits) {
  auto e = commutation_transform(fidelities, num_qubits);
  e /= static_cast<typename Derived::Scalar>(pauli_count(num_qubits));
  return e;
}

/// Inverse map: probabilities -> fidelities, f(P) = sum_Q chi_{P,Q} e(Q).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> inverse_walsh_hadamard(
    const Eigen::MatrixBase<Derived>& probabilities, int num_qubits) {
  return commutation_transform(probabilities, num_qubits);
}

/// Map-based overload; throws std::invalid_argument unless every one of the
/// 4^w Paulis has an entry.
std::map<PauliString, double> walsh_hadamard(const std::map<PauliString, double>& fidelities);

}  // namespace cerfold
