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

#include "cerfold/channel.hpp"

#include <algorithm>
#include <stdexcept>

#include "cerfold/errors.hpp"

namespace cerfold {

using cd = std::complex<double>;

namespace {

void check_channel_trace(const Eigen::MatrixXd& m, const char* where) {
  double dev = std::abs(m(0, 0) - 1.0);
  for (Eigen::Index c = 1; c < m.cols(); ++c) dev = std::max(dev, std::abs(m(0, c)));
  if (!(dev <= 1e-10)) {
    throw NumericalIntegrityError(std::string(where) +
                                  ": channel identity row deviates from (1, 0, ..., 0) by " +
                                  std::to_string(dev));
  }
}

}  // namespace

Superoperator exponentiate(const Superoperator& generator, double t) {
  if (generator.kind != SuperoperatorKind::kGenerator) {
    throw std::invalid_argument("exponentiate: input is not a generator");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("exponentiate: t must be >= 0");
  Superoperator out{generator.support, expm_taylor(generator.matrix * t),
                    SuperoperatorKind::kChannel};
  check_channel_trace(out.matrix, "exponentiate");
  return out;
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  if (a.support != b.support) throw std::invalid_argument("compose: support mismatch");
  if (a.kind != SuperoperatorKind::kChannel || b.kind != SuperoperatorKind::kChannel) {
    throw std::invalid_argument("compose: both operands must be channels");
  }
  return {a.support, a.matrix * b.matrix, SuperoperatorKind::kChannel};
}

Superoperator identity_channel(std::span<const int> support) {
  if (static_cast<int>(support.size()) > kMaxSuperoperatorQubits) {
    throw std::invalid_argument("identity_channel: support exceeds the size limit");
  }
  const auto dim = static_cast<Eigen::Index>(pauli_count(static_cast<int>(support.size())));
  return {{support.begin(), support.end()}, Eigen::MatrixXd::Identity(dim, dim),
          SuperoperatorKind::kChannel};
}

double pauli_fidelity(const Superoperator& channel, const PauliString& p) {
  if (p.num_qubits() != channel.num_qubits()) {
    throw std::invalid_argument("pauli_fidelity: Pauli " + p.str() + " is not on the " +
                                std::to_string(channel.num_qubits()) + "-qubit support");
  }
  return channel.entry(p, p);
}

double pauli_fidelity_global(const Superoperator& channel, const PauliString& p) {
  return pauli_fidelity(channel, localize(p, channel.support));
}

Eigen::MatrixXd unitary_ptm(const Eigen::MatrixXcd& u) {
  const Eigen::Index dim = u.rows();
  int w = 0;
  while ((Eigen::Index{1} << w) < dim) ++w;
  if ((Eigen::Index{1} << w) != dim || u.cols() != dim) {
    throw std::invalid_argument("unitary_ptm: matrix must be 2^w x 2^w");
  }
  const auto paulis = all_paulis(w);
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(paulis.size());
  for (const auto& p : paulis) mats.push_back(pauli_matrix(p));
  const auto n = static_cast<Eigen::Index>(paulis.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::MatrixXcd image = u * mats[static_cast<std::size_t>(c)] * u.adjoint();
    for (Eigen::Index row = 0; row < n; ++row) {
      // tr(Q M) with Q Hermitian equals sum conj(Q) .* M.
      const cd tr = (mats[static_cast<std::size_t>(row)].conjugate().cwiseProduct(image)).sum();
      r(row, c) = tr.real() / static_cast<double>(dim);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Gates

namespace {

Eigen::MatrixXcd named_gate(const std::string& name) {
  const double s = 1.0 / std::sqrt(2.0);
  const cd i{0.0, 1.0};
  Eigen::MatrixXcd g;
  if (name == "I") {
    g = Eigen::MatrixXcd::Identity(2, 2);
  } else if (name == "X") {
    g.resize(2, 2);
    g << 0, 1, 1, 0;
  } else if (name == "Y") {
    g.resize(2, 2);
    g << 0, -i, i, 0;
  } else if (name == "Z") {
    g.resize(2, 2);
    g << 1, 0, 0, -1;
  } else if (name == "H") {
    g.resize(2, 2);
    g << s, s, s, -s;
  } else if (name == "S") {
    g.resize(2, 2);
    g << 1, 0, 0, i;
  } else if (name == "Sdg") {
    g.resize(2, 2);
    g << 1, 0, 0, -i;
  } else if (name == "CNOT" || name == "CX") {
    g = Eigen::MatrixXcd::Zero(4, 4);
    g(0, 0) = g(1, 1) = g(2, 3) = g(3, 2) = 1.0;
  } else if (name == "CZ") {
    g = Eigen::MatrixXcd::Identity(4, 4);
    g(3, 3) = -1.0;
  } else if (name == "SWAP") {
    g = Eigen::MatrixXcd::Zero(4, 4);
    g(0, 0) = g(1, 2) = g(2, 1) = g(3, 3) = 1.0;
  } else {
    throw ConfigError("unknown gate '" + name + "'");
  }
  return g;
}

// Gate acting on local positions; position p is bit (w - 1 - p) of a basis index.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& gate, const std::vector<int>& positions, int w) {
  const Eigen::Index dim = Eigen::Index{1} << w;
  const int k = static_cast<int>(positions.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  auto sub_index = [&](Eigen::Index basis) {
    Eigen::Index s = 0;
    for (int j = 0; j < k; ++j) {
      s = (s << 1) | ((basis >> (w - 1 - positions[static_cast<std::size_t>(j)])) & 1);
    }
    return s;
  };
  Eigen::Index mask = 0;
  for (int p : positions) mask |= Eigen::Index{1} << (w - 1 - p);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Eigen::Index in = sub_index(col);
    for (Eigen::Index outsub = 0; outsub < (Eigen::Index{1} << k); ++outsub) {
      const cd amp = gate(outsub, in);
      if (amp == cd{0.0, 0.0}) continue;
      Eigen::Index row = col & ~mask;
      for (int j = 0; j < k; ++j) {
        if ((outsub >> (k - 1 - j)) & 1) {
          row |= Eigen::Index{1} << (w - 1 - positions[static_cast<std::size_t>(j)]);
        }
      }
      out(row, col) += amp;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd gate_list_unitary(std::span<const int> support, const std::vector<GateSpec>& gates) {
  const int w = static_cast<int>(support.size());
  if (w < 1 || w > kMaxSuperoperatorQubits) {
    throw ConfigError("hard cycle support must hold 1.." + std::to_string(kMaxSuperoperatorQubits) +
                      " qubits");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(Eigen::Index{1} << w, Eigen::Index{1} << w);
  for (const auto& g : gates) {
    const Eigen::MatrixXcd m = named_gate(g.name);
    const int arity = m.rows() == 2 ? 1 : 2;
    if (static_cast<int>(g.qubits.size()) != arity) {
      throw ConfigError("gate '" + g.name + "' takes " + std::to_string(arity) + " qubit(s)");
    }
    std::vector<int> positions;
    for (int q : g.qubits) {
      const auto it = std::find(support.begin(), support.end(), q);
      if (it == support.end()) {
        throw ConfigError("gate '" + g.name + "' acts on qubit " + std::to_string(q) +
                          " outside the cycle support");
      }
      positions.push_back(static_cast<int>(it - support.begin()));
    }
    if (arity == 2 && positions[0] == positions[1]) {
      throw ConfigError("gate '" + g.name + "' repeats a qubit");
    }
    u = embed(m, positions, w) * u;
  }
  return u;
}

// ---------------------------------------------------------------------------
// HardCycle

HardCycle::HardCycle(std::vector<int> support, Eigen::MatrixXcd unitary)
    : support_(std::move(support)), unitary_(std::move(unitary)) {
  const int w = static_cast<int>(support_.size());
  if (w < 1 || w > kMaxSuperoperatorQubits) {
    throw ConfigError("hard cycle support must hold 1.." + std::to_string(kMaxSuperoperatorQubits) +
                      " qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << w;
  if (unitary_.rows() != dim || unitary_.cols() != dim) {
    throw ConfigError("hard cycle unitary has the wrong dimension");
  }
  if (!(unitary_.adjoint() * unitary_).isApprox(Eigen::MatrixXcd::Identity(dim, dim), 1e-10)) {
    throw ConfigError("hard cycle matrix is not unitary");
  }
  ptm_ = Superoperator{support_, unitary_ptm(unitary_), SuperoperatorKind::kChannel};

  const auto n = ptm_.matrix.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd power = ptm_.matrix;
  cyclicity_ = 0;
  for (int c = 1; c <= kMaxCyclicity; ++c) {
    if ((power - id).cwiseAbs().maxCoeff() <= 1e-8) {
      cyclicity_ = c;
      break;
    }
    power = ptm_.matrix * power;
  }
  if (cyclicity_ == 0) {
    throw ConfigError("hard cycle cyclicity exceeds " + std::to_string(kMaxCyclicity));
  }

  clifford_ = true;
  image_.assign(static_cast<std::size_t>(n), 0);
  image_sign_.assign(static_cast<std::size_t>(n), 0);
  for (Eigen::Index c = 0; c < n && clifford_; ++c) {
    int hits = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
      const double v = ptm_.matrix(r, c);
      if (std::abs(std::abs(v) - 1.0) <= 1e-9) {
        ++hits;
        image_[static_cast<std::size_t>(c)] = static_cast<std::size_t>(r);
        image_sign_[static_cast<std::size_t>(c)] = v > 0 ? 1 : -1;
      } else if (std::abs(v) > 1e-9) {
        clifford_ = false;
      }
    }
    if (hits != 1) clifford_ = false;
  }
}

HardCycle HardCycle::from_gates(std::vector<int> support, const std::vector<GateSpec>& gates) {
  Eigen::MatrixXcd u = gate_list_unitary(support, gates);
  HardCycle c(std::move(support), std::move(u));
  c.gates_ = gates;
  return c;
}

SignedPauli HardCycle::conjugate(const SignedPauli& p) const {
  if (!clifford_) throw ConfigError("hard cycle is not Clifford");
  if (p.pauli.num_qubits() != num_qubits()) {
    throw std::invalid_argument("conjugate: Pauli is not on the cycle support");
  }
  const auto col = p.pauli.index();
  const int sign = image_sign_[col];
  return SignedPauli{PauliString::from_index(num_qubits(), image_[col]),
                     (p.phase + (sign < 0 ? 2 : 0)) % 4};
}

SignedPauli HardCycle::conjugate_power(const SignedPauli& p, int k) const {
  if (k < 0) throw std::invalid_argument("conjugate_power: k must be >= 0");
  SignedPauli out = p;
  for (int i = 0; i < k % cyclicity_; ++i) out = conjugate(out);
  return out;
}

SignedPauli HardCycle::power_as_pauli(int k, bool& ok) const {
  ok = false;
  const int w = num_qubits();
  const Eigen::Index dim = Eigen::Index{1} << w;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (int i = 0; i < k % cyclicity_; ++i) u = unitary_ * u;
  // Largest overlap tr(R^dagger U) / 2^w identifies the candidate Pauli R.
  for (const auto& r : all_paulis(w)) {
    const cd ov = (pauli_matrix(r).conjugate().cwiseProduct(u)).sum() / static_cast<double>(dim);
    if (std::abs(std::abs(ov) - 1.0) > 1e-9) continue;
    ok = true;
    // U = ov R; keep the nearest fourth root of unity as the recorded phase.
    const double angle = std::arg(ov);
    const int k4 = static_cast<int>(std::lround(angle / (M_PI / 2.0)));
    return SignedPauli{r, ((k4 % 4) + 4) % 4};
  }
  return SignedPauli{PauliString(w), 0};
}

// ---------------------------------------------------------------------------

Superoperator fold_with_cycle(const Superoperator& error, const HardCycle& cycle, int x) {
  if (x < 1) throw std::invalid_argument("fold_with_cycle: x must be >= 1");
  if ((x - 1) % cycle.cyclicity() != 0) {
    throw std::invalid_argument("fold_with_cycle: x = " + std::to_string(x) +
                                " violates x = 1 (mod " + std::to_string(cycle.cyclicity()) + ")");
  }
  if (error.support != cycle.support()) {
    throw std::invalid_argument("fold_with_cycle: error and cycle supports differ");
  }
  const Eigen::MatrixXd noisy = cycle.ptm().matrix * error.matrix;
  Eigen::MatrixXd power = noisy;
  for (int i = 1; i < x; ++i) power = noisy * power;
  return {error.support, cycle.ptm().matrix.transpose() * power, SuperoperatorKind::kChannel};
}

Superoperator twirl(const Superoperator& channel) {
  if (channel.kind != SuperoperatorKind::kChannel) {
    throw std::invalid_argument("twirl: input is not a channel");
  }
  Superoperator out = channel;
  out.matrix = channel.matrix.diagonal().asDiagonal();
  return out;
}

double predicted_fidelity(const NoiseModel& model, const PauliString& p, double x) {
  if (p.num_qubits() != model.num_qubits()) {
    throw std::invalid_argument("predicted_fidelity: Pauli size does not match the model");
  }
  double coherent = 0.0;
  for (const auto& t : model.hamiltonian()) {
    if (anticommute(t.pauli, p)) coherent += t.coefficient * t.coefficient;
  }
  double incoherent = 0.0;
  for (const auto& j : model.jumps()) {
    for (const auto& t : j.terms) {
      if (anticommute(t.pauli, p)) incoherent += std::norm(t.coefficient);
    }
  }
  return 1.0 - 2.0 * coherent * x * x - 2.0 * incoherent * x;
}

double predicted_error_prob(const NoiseModel& model, const PauliString& p, double x) {
  if (p.num_qubits() != model.num_qubits()) {
    throw std::invalid_argument("predicted_error_prob: Pauli size does not match the model");
  }
  const double h = model.hamiltonian_coefficient(p);
  double l2 = 0.0;
  for (const auto& j : model.jumps()) l2 += std::norm(j.coefficient(p));
  return x * x * h * h + x * l2;
}

}  // namespace cerfold
