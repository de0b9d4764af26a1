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

#include "cerfold/oracle.hpp"

#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "cerfold/errors.hpp"

namespace cerfold {

using cd = std::complex<double>;

namespace {

void check_size(int n) {
  if (n < 1 || n > kMaxOracleQubits) {
    throw std::invalid_argument("oracle: register of " + std::to_string(n) +
                                " qubits exceeds the oracle limit of " +
                                std::to_string(kMaxOracleQubits));
  }
}

Eigen::MatrixXcd operator_from_terms(const std::vector<JumpTerm>& terms, int n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : terms) m += t.coefficient * pauli_matrix(t.pauli);
  return m;
}

// Column-stacked vec(A).
Eigen::VectorXcd vec(const Eigen::MatrixXcd& a) {
  return Eigen::Map<const Eigen::VectorXcd>(a.data(), a.size());
}

}  // namespace

Eigen::MatrixXcd colvec_lindbladian(const NoiseModel& model) {
  const int n = model.num_qubits();
  check_size(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  const cd i{0.0, 1.0};

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : model.hamiltonian()) h += t.coefficient * pauli_matrix(t.pauli);
  Eigen::MatrixXcd out = -i * (Eigen::kroneckerProduct(id, h).eval() -
                               Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const auto& j : model.jumps()) {
    const Eigen::MatrixXcd l = operator_from_terms(j.terms, n);
    const Eigen::MatrixXcd ldl = l.adjoint() * l;
    out += Eigen::kroneckerProduct(l.conjugate(), l).eval();
    out -= 0.5 * Eigen::kroneckerProduct(id, ldl).eval();
    out -= 0.5 * Eigen::kroneckerProduct(ldl.transpose(), id).eval();
  }
  return out;
}

Eigen::MatrixXd colvec_to_pauli(const Eigen::MatrixXcd& colvec, int num_qubits) {
  check_size(num_qubits);
  const auto paulis = all_paulis(num_qubits);
  const auto np = static_cast<Eigen::Index>(paulis.size());
  if (colvec.rows() != np || colvec.cols() != np) {
    throw std::invalid_argument("colvec_to_pauli: matrix must be 4^w x 4^w");
  }
  Eigen::MatrixXcd u(np, np);
  for (Eigen::Index k = 0; k < np; ++k) u.col(k) = vec(pauli_matrix(paulis[static_cast<std::size_t>(k)]));
  const Eigen::MatrixXcd t = u.adjoint() * colvec * u / static_cast<double>(Eigen::Index{1} << num_qubits);
  const double imag = t.imag().cwiseAbs().maxCoeff();
  if (imag > 1e-10 * (1.0 + t.real().cwiseAbs().maxCoeff())) {
    throw NumericalIntegrityError("colvec_to_pauli: Pauli-basis matrix is not real");
  }
  return t.real();
}

Superoperator oracle_generator(const NoiseModel& model) {
  const int n = model.num_qubits();
  std::vector<int> support(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) support[static_cast<std::size_t>(q)] = q;
  return {support, colvec_to_pauli(colvec_lindbladian(model), n), SuperoperatorKind::kGenerator};
}

double exact_repeated_fidelity(const NoiseModel& model, const PauliString& p, double x) {
  const int n = model.num_qubits();
  check_size(n);
  if (p.num_qubits() != n) throw std::invalid_argument("exact_repeated_fidelity: size mismatch");
  if (!(x >= 0.0)) throw std::invalid_argument("exact_repeated_fidelity: x must be >= 0");
  const Eigen::MatrixXcd gen = colvec_lindbladian(model) * cd{x, 0.0};
  const Eigen::MatrixXcd channel = gen.exp();
  const Eigen::VectorXcd v = vec(pauli_matrix(p));
  const cd f = v.dot(channel * v) / static_cast<double>(Eigen::Index{1} << n);
  return f.real();
}

Eigen::MatrixXcd dense_circuit_product(const CompiledCircuit& circuit) {
  const HardCycle& cycle = *circuit.spec.cycle;
  const int w = cycle.num_qubits();
  if (w > 3) throw std::invalid_argument("dense_circuit_product: support exceeds 3 qubits");
  const Eigen::Index d = Eigen::Index{1} << w;
  Eigen::MatrixXcd cx = Eigen::MatrixXcd::Identity(d, d);
  for (int i = 0; i < circuit.spec.x; ++i) cx = cycle.unitary() * cx;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (std::size_t k = 0; k < circuit.easy_cycles.size(); ++k) {
    if (k > 0) u = cx * u;
    const auto& layer = circuit.easy_cycles[k];
    u = layer.phase_value() * pauli_matrix(layer.pauli) * u;
  }
  return u;
}

double frame_mismatch(const CompiledCircuit& circuit) {
  const Eigen::MatrixXcd u = dense_circuit_product(circuit);
  const Eigen::MatrixXcd f =
      circuit.net_frame.phase_value() * pauli_matrix(circuit.net_frame.pauli);
  const double d = static_cast<double>(u.rows());
  const cd overlap = (f.adjoint() * u).trace() / d;
  // Equal up to global phase iff |overlap| = 1; also pin the recorded phase.
  return std::max(std::abs(std::abs(overlap) - 1.0), (u - overlap * f).cwiseAbs().maxCoeff());
}

GridSearchResult grid_search_2d(const std::function<double(double, double)>& cost, double a_lo,
                                double a_hi, double b_lo, double b_hi, int n) {
  if (n < 2) throw std::invalid_argument("grid_search_2d: need at least 2 points per axis");
  GridSearchResult best;
  best.cost = std::numeric_limits<double>::infinity();
  best.cell_a = (a_hi - a_lo) / (n - 1);
  best.cell_b = (b_hi - b_lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double a = a_lo + best.cell_a * i;
    for (int j = 0; j < n; ++j) {
      const double b = b_lo + best.cell_b * j;
      const double c = cost(a, b);
      if (c < best.cost) {
        best.cost = c;
        best.a = a;
        best.b = b;
      }
    }
  }
  return best;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix, int num_qubits) {
  const auto paulis = all_paulis(num_qubits);
  if (static_cast<std::size_t>(matrix.rows()) != paulis.size() ||
      static_cast<std::size_t>(matrix.cols()) != paulis.size()) {
    throw std::invalid_argument("write_matrix_csv: matrix must be 4^w x 4^w");
  }
  out << "row";
  for (const auto& p : paulis) out << ',' << p.str();
  out << '\n';
  char buf[48];
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    out << paulis[static_cast<std::size_t>(r)].str();
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", matrix(r, c));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace cerfold
