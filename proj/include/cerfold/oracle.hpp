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

#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Core>

#include "cerfold/lindblad.hpp"
#include "cerfold/protocol.hpp"
#include "cerfold/superoperator.hpp"

namespace cerfold {

/// Largest register handled by the dense oracles.
inline constexpr int kMaxOracleQubits = 4;

/// Lindbladian acting on column-stacked density matrices:
/// -i (I (x) H - H^T (x) I) + sum_j [L* (x) L - 1/2 (I (x) L^dag L + L^T L* (x) I)].
Eigen::MatrixXcd colvec_lindbladian(const NoiseModel& model);

/// Change of basis T = U^dag M U / 2^w with U's columns the vectorized Paulis.
/// Throws NumericalIntegrityError when T has non-negligible imaginary parts.
Eigen::MatrixXd colvec_to_pauli(const Eigen::MatrixXcd& colvec, int num_qubits);

/// Pauli-basis generator computed through the column-stacked form.
Superoperator oracle_generator(const NoiseModel& model);

/// f_P of exp(x Lambda), exponentiated in the column-stacked basis with an
/// independent matrix-exponential routine.
double exact_repeated_fidelity(const NoiseModel& model, const PauliString& p, double x);

/// Literal product G_m C^x ... C^x G_0 of the ideal layers (support <= 3).
Eigen::MatrixXcd dense_circuit_product(const CompiledCircuit& circuit);

/// max | |tr(F^dag U)| / 2^w - 1 | between the net frame and the dense
/// product; zero when they agree up to a global phase.
double frame_mismatch(const CompiledCircuit& circuit);

struct GridSearchResult {
  double a = 0.0;
  double b = 0.0;
  double cost = 0.0;
  double cell_a = 0.0;  // lattice spacing
  double cell_b = 0.0;
};

/// Exhaustive search of cost(a, b) over an n x n lattice spanning
/// [a_lo, a_hi] x [b_lo, b_hi] (end points included).
GridSearchResult grid_search_2d(const std::function<double(double, double)>& cost, double a_lo,
                                double a_hi, double b_lo, double b_hi, int n = 400);

/// Row-major CSV dump with Pauli labels on both axes.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix, int num_qubits);

}  // namespace cerfold
