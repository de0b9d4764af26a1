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

#include <vector>

#include <Eigen/Core>

#include "cerfold/pauli.hpp"

namespace cerfold {

/// Largest support (in qubits) for which superoperators are built.
inline constexpr int kMaxSuperoperatorQubits = 6;

enum class SuperoperatorKind { kGenerator, kChannel };

/// Real Pauli-transfer matrix on an ordered qubit support.
///
/// matrix(Q, P) = tr(Q M[P]) / 2^w with rows and columns in the PauliString
/// index order. For generators this is the transition amplitude t_{P->Q}.
struct Superoperator {
  std::vector<int> support;
  Eigen::MatrixXd matrix;
  SuperoperatorKind kind = SuperoperatorKind::kChannel;

  int num_qubits() const { return static_cast<int>(support.size()); }
  double entry(const PauliString& row, const PauliString& col) const {
    return matrix(static_cast<Eigen::Index>(row.index()), static_cast<Eigen::Index>(col.index()));
  }
};

}  // namespace cerfold
