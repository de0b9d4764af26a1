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

#include <map>
#include <random>

#include <gtest/gtest.h>

#include "cerfold/pauli.hpp"

namespace cerfold {
namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

TEST(PauliString, ParseAndPrint) {
  const PauliString p = P("XYZI");
  EXPECT_EQ(p.num_qubits(), 4);
  EXPECT_EQ(p.str(), "XYZI");
  EXPECT_EQ(p.at(0), 'X');
  EXPECT_EQ(p.at(3), 'I');
  EXPECT_EQ(p.x_mask(), 0b0011u);
  EXPECT_EQ(p.z_mask(), 0b0110u);
  EXPECT_EQ(p.weight(), 3);
  EXPECT_FALSE(p.is_identity());
  EXPECT_TRUE(P("III").is_identity());
  EXPECT_THROW(P("XQ"), std::invalid_argument);
  EXPECT_THROW(P(""), std::invalid_argument);
  EXPECT_THROW(P("XXXXXXXXXXXXX"), std::invalid_argument);
}

TEST(PauliString, MasksRejectHighBits) {
  EXPECT_THROW(PauliString(2, 0b100u, 0u), std::invalid_argument);
  EXPECT_THROW(PauliString(2, 0u, 0b1000u), std::invalid_argument);
}

TEST(PauliString, IndexOrderingIsBaseFour) {
  const auto all = all_paulis(2);
  ASSERT_EQ(all.size(), 16u);
  EXPECT_EQ(all[0].str(), "II");
  EXPECT_EQ(all[1].str(), "IX");
  EXPECT_EQ(all[4].str(), "XI");
  EXPECT_EQ(all[15].str(), "ZZ");
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].index(), i);
    EXPECT_EQ(PauliString::from_index(2, i), all[i]);
  }
}

TEST(PauliString, WeightIsPopcountOfUnion) {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    const PauliString p = PauliString::from_index(6, rng() % pauli_count(6));
    int w = 0;
    for (int q = 0; q < 6; ++q) w += p.at(q) != 'I';
    EXPECT_EQ(p.weight(), w);
  }
}

TEST(Commutes, Examples) {
  EXPECT_EQ(commutes(P("X"), P("X")), 1);
  EXPECT_EQ(commutes(P("X"), P("Z")), -1);
  EXPECT_EQ(commutes(P("XX"), P("ZZ")), 1);
  EXPECT_THROW(commutes(P("X"), P("XX")), std::invalid_argument);
}

TEST(Commutes, MatchesMatrixCommutator) {
  const auto all = all_paulis(2);
  for (const auto& p : all) {
    for (const auto& q : all) {
      const Eigen::MatrixXcd a = pauli_matrix(p), b = pauli_matrix(q);
      const double comm = (a * b - b * a).norm();
      EXPECT_EQ(commutes(p, q), comm < 1e-12 ? 1 : -1) << p.str() << " " << q.str();
      EXPECT_EQ(commutes(p, q), commutes(q, p));
    }
  }
}

TEST(Multiply, Examples) {
  const SignedPauli xz = multiply(P("X"), P("Z"));
  EXPECT_EQ(xz.pauli.str(), "Y");
  EXPECT_EQ(xz.phase, 3);  // -i
  const SignedPauli iq = multiply(P("I"), P("Y"));
  EXPECT_EQ(iq.pauli.str(), "Y");
  EXPECT_EQ(iq.phase, 0);
  const SignedPauli yy = multiply(P("Y"), P("Y"));
  EXPECT_TRUE(yy.pauli.is_identity());
  EXPECT_EQ(yy.phase, 0);
  EXPECT_THROW(multiply(P("X"), P("XY")), std::invalid_argument);
}

TEST(Multiply, MatchesMatrixProduct) {
  const auto all = all_paulis(2);
  for (const auto& p : all) {
    for (const auto& q : all) {
      for (int phase = 0; phase < 4; ++phase) {
        const SignedPauli a{p, phase};
        const SignedPauli r = multiply(a, SignedPauli{q, 1});
        const Eigen::MatrixXcd expect =
            a.phase_value() * pauli_matrix(p) * std::complex<double>(0, 1) * pauli_matrix(q);
        EXPECT_LT((r.phase_value() * pauli_matrix(r.pauli) - expect).norm(), 1e-12);
        EXPECT_TRUE(multiply(a, a).pauli.is_identity());
      }
    }
  }
}

TEST(PauliMatrix, QubitZeroIsMostSignificantFactor) {
  const Eigen::MatrixXcd zi = pauli_matrix(P("ZI"));
  EXPECT_DOUBLE_EQ(zi(0, 0).real(), 1.0);
  EXPECT_DOUBLE_EQ(zi(1, 1).real(), 1.0);
  EXPECT_DOUBLE_EQ(zi(2, 2).real(), -1.0);
  EXPECT_DOUBLE_EQ(zi(3, 3).real(), -1.0);
}

TEST(WalshHadamard, Examples) {
  Eigen::Vector4d f(1, 1, 1, 1);
  EXPECT_TRUE(walsh_hadamard(f, 1).isApprox(Eigen::Vector4d(1, 0, 0, 0)));
  f << 1, 0, 0, 0;
  EXPECT_TRUE(walsh_hadamard(f, 1).isApprox(Eigen::Vector4d(0.25, 0.25, 0.25, 0.25)));
  f << 1, -1, -1, 1;
  EXPECT_LT((walsh_hadamard(f, 1) - Eigen::Vector4d(0, 0, 0, 1)).norm(), 1e-15);
}

TEST(WalshHadamard, MapFormRequiresFullIndexSet) {
  std::map<PauliString, double> f{{P("I"), 1.0}, {P("X"), 0.9}, {P("Y"), 0.8}};
  EXPECT_THROW(walsh_hadamard(f), std::invalid_argument);
  f[P("Z")] = 0.9;
  const auto e = walsh_hadamard(f);
  EXPECT_NEAR(e.at(P("I")), 0.9, 1e-15);
  EXPECT_NEAR(e.at(P("X")), 0.05, 1e-15);
  EXPECT_NEAR(e.at(P("Y")), 0.0, 1e-15);
  EXPECT_NEAR(e.at(P("Z")), 0.05, 1e-15);
}

TEST(WalshHadamard, MatchesCommutationMatrix) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int w = 1; w <= 3; ++w) {
    const Eigen::MatrixXd chi = commutation_matrix(w);
    Eigen::VectorXd f(static_cast<Eigen::Index>(pauli_count(w)));
    for (auto& v : f) v = u(rng);
    const Eigen::VectorXd fast = commutation_transform(f, w);
    EXPECT_LT((fast - chi * f).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(chi.isApprox(chi.transpose()));
  }
}

TEST(WalshHadamard, InvolutionUpToScale) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int w = 1; w <= 3; ++w) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(pauli_count(w)));
    for (auto& v : f) v = u(rng);
    const Eigen::VectorXd twice = commutation_transform(commutation_transform(f, w), w);
    EXPECT_LT((twice - static_cast<double>(pauli_count(w)) * f).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((inverse_walsh_hadamard(walsh_hadamard(f, w), w) - f).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(WalshHadamard, ProbabilitiesSumToIdentityFidelity) {
  Eigen::VectorXd f = Eigen::VectorXd::Constant(16, 0.97);
  f[0] = 0.8;
  EXPECT_NEAR(walsh_hadamard(f, 2).sum(), 0.8, 1e-15);
  EXPECT_THROW(walsh_hadamard(Eigen::VectorXd::Ones(15), 2), std::invalid_argument);
}

}  // namespace
}  // namespace cerfold
