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

#include "cerfold/pauli.hpp"

#include <cmath>
#include <limits>

namespace cerfold {

namespace {

void check_qubit_count(int n) {
  if (n < 0 || n > PauliString::kMaxQubits) {
    throw std::invalid_argument("Pauli qubit count must be in [0, " +
                                std::to_string(PauliString::kMaxQubits) + "], got " +
                                std::to_string(n));
  }
}

// Digit order I, X, Y, Z.
constexpr std::array<char, 4> kDigitChars{'I', 'X', 'Y', 'Z'};

int digit_of(bool x, bool z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); }

}  // namespace

PauliString::PauliString(int num_qubits) : n_(num_qubits) { check_qubit_count(num_qubits); }

PauliString::PauliString(int num_qubits, std::uint32_t x_mask, std::uint32_t z_mask)
    : n_(num_qubits), x_(x_mask), z_(z_mask) {
  check_qubit_count(num_qubits);
  const std::uint32_t valid = num_qubits == 32 ? ~0u : ((1u << num_qubits) - 1u);
  if ((x_mask | z_mask) & ~valid) {
    throw std::invalid_argument("Pauli masks have bits set beyond qubit count " +
                                std::to_string(num_qubits));
  }
}

PauliString PauliString::parse(std::string_view text) {
  const int n = static_cast<int>(text.size());
  if (n == 0) throw std::invalid_argument("empty Pauli string");
  check_qubit_count(n);
  std::uint32_t x = 0, z = 0;
  for (int q = 0; q < n; ++q) {
    switch (text[q]) {
      case 'I': case 'i': case '_': break;
      case 'X': case 'x': x |= 1u << q; break;
      case 'Y': case 'y': x |= 1u << q; z |= 1u << q; break;
      case 'Z': case 'z': z |= 1u << q; break;
      default:
        throw std::invalid_argument("invalid Pauli character '" + std::string(1, text[q]) +
                                    "' in \"" + std::string(text) + "\"");
    }
  }
  return PauliString(n, x, z);
}

PauliString PauliString::from_index(int num_qubits, std::size_t index) {
  check_qubit_count(num_qubits);
  if (index >= pauli_count(num_qubits)) {
    throw std::invalid_argument("Pauli index out of range");
  }
  std::uint32_t x = 0, z = 0;
  for (int q = num_qubits - 1; q >= 0; --q) {
    const int d = static_cast<int>(index & 3u);
    index >>= 2;
    if (d == 1 || d == 2) x |= 1u << q;
    if (d == 2 || d == 3) z |= 1u << q;
  }
  return PauliString(num_qubits, x, z);
}

PauliString PauliString::single(int num_qubits, int qubit, char op) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw std::invalid_argument("qubit " + std::to_string(qubit) + " out of range");
  }
  std::string text(static_cast<std::size_t>(num_qubits), 'I');
  text[static_cast<std::size_t>(qubit)] = op;
  return parse(text);
}

char PauliString::at(int qubit) const {
  return kDigitChars[digit_of((x_ >> qubit) & 1u, (z_ >> qubit) & 1u)];
}

std::size_t PauliString::index() const {
  std::size_t idx = 0;
  for (int q = 0; q < n_; ++q) {
    idx = (idx << 2) | static_cast<std::size_t>(digit_of((x_ >> q) & 1u, (z_ >> q) & 1u));
  }
  return idx;
}

std::string PauliString::str() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int q = 0; q < n_; ++q) s[static_cast<std::size_t>(q)] = at(q);
  return s;
}

std::vector<PauliString> all_paulis(int num_qubits) {
  check_qubit_count(num_qubits);
  std::vector<PauliString> out;
  out.reserve(pauli_count(num_qubits));
  for (std::size_t i = 0; i < pauli_count(num_qubits); ++i) {
    out.push_back(PauliString::from_index(num_qubits, i));
  }
  return out;
}

int commutes(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw std::invalid_argument("commutes: qubit count mismatch (" +
                                std::to_string(p.num_qubits()) + " vs " +
                                std::to_string(q.num_qubits()) + ")");
  }
  return commutation_sign(p.x_mask(), p.z_mask(), q.x_mask(), q.z_mask());
}

int product_phase(std::uint32_t x1, std::uint32_t z1, std::uint32_t x2, std::uint32_t z2) {
  // Per qubit: X*Y = iZ, Y*Z = iX, Z*X = iY and the reversed products give -i.
  const std::uint32_t y1 = x1 & z1;
  const std::uint32_t xo1 = x1 & ~z1;
  const std::uint32_t zo1 = z1 & ~x1;
  const std::uint32_t y2 = x2 & z2;
  const std::uint32_t xo2 = x2 & ~z2;
  const std::uint32_t zo2 = z2 & ~x2;
  const int plus = std::popcount(xo1 & y2) + std::popcount(y1 & zo2) + std::popcount(zo1 & xo2);
  const int minus = std::popcount(y1 & xo2) + std::popcount(zo1 & y2) + std::popcount(xo1 & zo2);
  return ((plus - minus) % 4 + 4) % 4;
}

SignedPauli multiply(const SignedPauli& p, const SignedPauli& q) {
  const int n = p.pauli.num_qubits();
  if (n != q.pauli.num_qubits()) {
    throw std::invalid_argument("multiply: qubit count mismatch");
  }
  const auto& a = p.pauli;
  const auto& b = q.pauli;
  const int g = product_phase(a.x_mask(), a.z_mask(), b.x_mask(), b.z_mask());
  return SignedPauli{PauliString(n, a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask()),
                     (p.phase + q.phase + g) % 4};
}

std::complex<double> SignedPauli::phase_value() const {
  static constexpr std::array<std::complex<double>, 4> kPowers{
      std::complex<double>{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPowers[static_cast<std::size_t>(phase & 3)];
}

std::string SignedPauli::str() const {
  static constexpr std::array<const char*, 4> kPrefix{"+", "+i", "-", "-i"};
  return kPrefix[static_cast<std::size_t>(phase & 3)] + pauli.str();
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  const int n = p.num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  // Bit (n-1-q) of a basis index is qubit q.
  std::uint32_t xb = 0, zb = 0;
  for (int q = 0; q < n; ++q) {
    if ((p.x_mask() >> q) & 1u) xb |= 1u << (n - 1 - q);
    if ((p.z_mask() >> q) & 1u) zb |= 1u << (n - 1 - q);
  }
  // P = i^{|x & z|} X^x Z^z, acting as |b> -> i^{y} (-1)^{z.b} |b ^ x>.
  const std::complex<double> y_phase =
      SignedPauli{PauliString(0), std::popcount(xb & zb) % 4}.phase_value();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto ub = static_cast<std::uint32_t>(b);
    const double sign = (std::popcount(zb & ub) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(ub ^ xb), b) = y_phase * sign;
  }
  return m;
}

Eigen::MatrixXd commutation_matrix(int num_qubits) {
  const auto paulis = all_paulis(num_qubits);
  const auto n = static_cast<Eigen::Index>(paulis.size());
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      w(r, c) = commutes(paulis[static_cast<std::size_t>(r)], paulis[static_cast<std::size_t>(c)]);
    }
  }
  return w;
}

std::map<PauliString, double> walsh_hadamard(const std::map<PauliString, double>& fidelities) {
  if (fidelities.empty()) throw std::invalid_argument("walsh_hadamard: empty fidelity map");
  const int w = fidelities.begin()->first.num_qubits();
  Eigen::VectorXd f = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(pauli_count(w)),
                                                std::numeric_limits<double>::quiet_NaN());
  for (const auto& [p, value] : fidelities) {
    if (p.num_qubits() != w) throw std::invalid_argument("walsh_hadamard: mixed qubit counts");
    f[static_cast<Eigen::Index>(p.index())] = value;
  }
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (std::isnan(f[i])) {
      throw std::invalid_argument("walsh_hadamard: missing fidelity for " +
                                  PauliString::from_index(w, static_cast<std::size_t>(i)).str());
    }
  }
  const Eigen::VectorXd e = walsh_hadamard(f, w);
  std::map<PauliString, double> out;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    out.emplace(PauliString::from_index(w, static_cast<std::size_t>(i)), e[i]);
  }
  return out;
}

}  // namespace cerfold
