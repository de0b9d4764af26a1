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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cerfold/channel.hpp"
#include "cerfold/errors.hpp"
#include "cerfold/oracle.hpp"
#include "random_models.hpp"

namespace cerfold {
namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

NoiseModel single(std::vector<HamiltonianTerm> h, std::vector<LindbladJump> j) {
  return NoiseModel(ConnectivityGraph::line(1), std::move(h), std::move(j), 1);
}

TEST(Oracle, GeneratorAgreesOnRandomModels) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 3;
    const NoiseModel m = testing::random_model(rng, n, 0.05);
    const Eigen::MatrixXd a = build_generator(m).matrix;
    const Eigen::MatrixXd b = oracle_generator(m).matrix;
    ASSERT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12) << "trial " << trial;
  }
}

TEST(Oracle, GeneratorAgreesOnFourQubits) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const NoiseModel m = testing::random_model(rng, 4, 0.05);
    EXPECT_LE((build_generator(m).matrix - oracle_generator(m).matrix).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Oracle, EmptyModelIsZero) {
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(oracle_generator(NoiseModel::empty(n)).matrix.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Oracle, BitFlipGeneratorIsDiagonal) {
  const double g = 0.03;
  const Eigen::MatrixXd t = oracle_generator(single({}, {LindbladJump{0, {{P("X"), std::sqrt(g)}}}})).matrix;
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 4);
  expect(2, 2) = expect(3, 3) = -2 * g;
  EXPECT_LE((t - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Oracle, ColvecOfUnitaryHamiltonianIsAntiHermitian) {
  std::mt19937_64 rng(8);
  const NoiseModel m = testing::random_hamiltonian_model(rng, 2, 0.05);
  const Eigen::MatrixXcd l = colvec_lindbladian(m);
  EXPECT_LE((l + l.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Oracle, RepeatedFidelityExamples) {
  const NoiseModel rot = single({{P("Z"), 0.1}}, {});
  EXPECT_NEAR(exact_repeated_fidelity(rot, P("X"), 2.0), std::cos(0.4), 1e-13);
  EXPECT_NEAR(exact_repeated_fidelity(rot, P("X"), 2.0), 0.921061, 1e-6);
  EXPECT_NEAR(exact_repeated_fidelity(rot, P("Z"), 2.0), 1.0, 1e-14);
  EXPECT_NEAR(exact_repeated_fidelity(rot, P("X"), 0.0), 1.0, 1e-15);
  const NoiseModel deph = single({}, {LindbladJump{0, {{P("Z"), std::sqrt(0.05)}}}});
  EXPECT_NEAR(exact_repeated_fidelity(deph, P("X"), 2.0), std::exp(-0.2), 1e-13);
  EXPECT_NEAR(exact_repeated_fidelity(deph, P("X"), 2.0), 0.818731, 1e-6);
  EXPECT_THROW(exact_repeated_fidelity(deph, P("X"), -1.0), std::invalid_argument);
  EXPECT_THROW(exact_repeated_fidelity(deph, P("XX"), 1.0), std::invalid_argument);
}

TEST(Oracle, RepeatedFidelityMatchesChannelExponential) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 2;
    const NoiseModel m = testing::random_model(rng, n, 0.05);
    const Superoperator gen = build_generator(m);
    for (double x : {1.0, 3.0, 7.5}) {
      const Superoperator e = exponentiate(gen, x);
      for (const auto& p : all_paulis(n)) {
        EXPECT_NEAR(pauli_fidelity(e, p), exact_repeated_fidelity(m, p, x), 1e-12);
      }
    }
  }
}

TEST(Oracle, SizeCaps) {
  EXPECT_THROW(colvec_lindbladian(NoiseModel::empty(kMaxOracleQubits + 1)), std::invalid_argument);
  EXPECT_THROW(colvec_to_pauli(Eigen::MatrixXcd::Zero(4, 4), 2), std::invalid_argument);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(4, 4);
  bad(1, 2) = std::complex<double>(0.0, 1.0);
  EXPECT_THROW(colvec_to_pauli(bad, 1), NumericalIntegrityError);
}

TEST(Oracle, GridSearchFindsBowlMinimum) {
  const auto cost = [](double a, double b) { return (a - 0.31) * (a - 0.31) + 4 * (b + 0.12) * (b + 0.12); };
  const GridSearchResult g = grid_search_2d(cost, 0.0, 1.0, -1.0, 1.0, 101);
  EXPECT_DOUBLE_EQ(g.cell_a, 0.01);
  EXPECT_DOUBLE_EQ(g.cell_b, 0.02);
  EXPECT_LE(std::abs(g.a - 0.31), g.cell_a);
  EXPECT_LE(std::abs(g.b + 0.12), g.cell_b);
  EXPECT_THROW(grid_search_2d(cost, 0, 1, 0, 1, 1), std::invalid_argument);
}

TEST(Oracle, MatrixCsvLayout) {
  std::ostringstream out;
  write_matrix_csv(out, Eigen::MatrixXd::Identity(4, 4), 1);
  EXPECT_EQ(out.str(), "row,I,X,Y,Z\nI,1,0,0,0\nX,0,1,0,0\nY,0,0,1,0\nZ,0,0,0,1\n");
  EXPECT_THROW(write_matrix_csv(out, Eigen::MatrixXd::Identity(3, 3), 1), std::invalid_argument);
}

}  // namespace
}  // namespace cerfold
