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
#include <string>

#include <gtest/gtest.h>

#include "cerfold/channel.hpp"
#include "cerfold/errors.hpp"
#include "cerfold/lindblad.hpp"
#include "random_models.hpp"

namespace cerfold {
namespace {

PauliString P(const char* s) { return PauliString::parse(s); }

NoiseModel hz(double theta) {
  return NoiseModel(ConnectivityGraph::line(1), {{P("Z"), theta}}, {}, 1);
}

NoiseModel jump(const char* pauli, double gamma) {
  return NoiseModel(ConnectivityGraph::line(1), {},
                    {LindbladJump{0, {{P(pauli), std::sqrt(gamma)}}}}, 1);
}

double entry(const Superoperator& s, const char* row, const char* col) {
  return s.entry(P(row), P(col));
}

TEST(BuildGenerator, HamiltonianZ) {
  const double theta = 0.037;
  const Superoperator g = build_generator(hz(theta));
  EXPECT_EQ(g.kind, SuperoperatorKind::kGenerator);
  EXPECT_NEAR(entry(g, "Y", "X"), 2 * theta, 1e-15);
  EXPECT_NEAR(entry(g, "X", "Y"), -2 * theta, 1e-15);
  Eigen::Matrix4d rest = g.matrix;
  rest(2, 1) = rest(1, 2) = 0.0;
  EXPECT_EQ(rest.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildGenerator, DephasingJump) {
  const double gamma = 0.013;
  const Superoperator g = build_generator(jump("Z", gamma));
  Eigen::Matrix4d expect = Eigen::Vector4d(0, -2 * gamma, -2 * gamma, 0).asDiagonal();
  EXPECT_LT((g.matrix - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BuildGenerator, EmptyModelIsZero) {
  EXPECT_EQ(build_generator(NoiseModel::empty(2)).matrix.cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildGenerator, SizeLimits) {
  const NoiseModel m = NoiseModel::empty(7);
  std::vector<int> support{0, 1, 2, 3, 4, 5, 6};
  EXPECT_THROW(build_generator(m, support), std::invalid_argument);
  EXPECT_THROW(build_generator(NoiseModel(ConnectivityGraph::line(2), {{P("IZ"), 0.1}}, {}, 1),
                               std::vector<int>{0}),
               std::invalid_argument);
}

// Entries frozen from tests/oracles/derive_values.py (dense density-matrix
// Lindbladian, numpy).
TEST(BuildGenerator, TwoQubitModelMatchesDenseReference) {
  const NoiseModel m = load_noise_model(CERFOLD_CONFIG_DIR "/two_qubit_noise.json");
  const Superoperator g = build_generator(m);
  struct E { const char* row; const char* col; double value; };
  const E frozen[] = {
      {"IX", "IX", -0.0008}, {"IX", "ZY", -0.02},  {"IY", "II", 0.0008},  {"IY", "IY", -0.001},
      {"IY", "ZX", 0.02},    {"IZ", "IZ", -0.0002}, {"XI", "YZ", -0.02},  {"XY", "XI", 0.0008},
      {"XZ", "YI", -0.02},   {"YI", "ZI", -0.01},  {"YX", "ZX", -0.01},   {"YZ", "ZZ", -0.01},
      {"ZI", "YI", 0.01},    {"ZY", "ZI", 0.0008}, {"ZY", "ZY", -0.001},  {"ZZ", "ZZ", -0.0002},
  };
  int nonzero = 0;
  for (Eigen::Index r = 0; r < 16; ++r) {
    for (Eigen::Index c = 0; c < 16; ++c) nonzero += std::abs(g.matrix(r, c)) > 1e-15;
  }
  EXPECT_EQ(nonzero, 32);
  for (const auto& e : frozen) {
    EXPECT_NEAR(entry(g, e.row, e.col), e.value, 1e-15) << e.row << " <- " << e.col;
  }
}

TEST(BuildGenerator, RelaxationJumpsMatchDenseReference) {
  const NoiseModel m = load_noise_model(CERFOLD_CONFIG_DIR "/ancilla_noise.json");
  const Superoperator g = build_generator(m);
  EXPECT_NEAR(entry(g, "IIX", "IIX"), -0.0074, 1e-15);
  EXPECT_NEAR(entry(g, "IIY", "IIY"), -0.0074, 1e-15);
  EXPECT_NEAR(entry(g, "IIZ", "IIZ"), -0.0024, 1e-15);
  EXPECT_NEAR(entry(g, "XXI", "XXI"), -0.0148, 1e-15);
  EXPECT_NEAR(entry(g, "IIZ", "III"), 0.0024, 1e-15);
  EXPECT_NEAR(entry(g, "IIY", "IIX"), 2 * 0.044721359549995794, 1e-15);
}

TEST(BuildGenerator, IdentityRowVanishes) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    const NoiseModel m = testing::random_model(rng, 1 + t % 3, 0.05);
    const Superoperator g = build_generator(m);
    EXPECT_LT(g.matrix.row(0).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(TransitionAmplitude, Examples) {
  EXPECT_NEAR(transition_amplitude(hz(0.02), P("X"), P("Y")), 0.04, 1e-15);
  EXPECT_NEAR(transition_amplitude(jump("Z", 0.01), P("X"), P("X")), -0.02, 1e-15);
  EXPECT_EQ(transition_amplitude(jump("Z", 0.01), P("Z"), P("Z")), 0.0);
  EXPECT_THROW(transition_amplitude(hz(0.1), P("X"), P("XX")), std::invalid_argument);
}

TEST(TransitionAmplitude, MatchesGeneratorOnRandomModels) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    const NoiseModel m = testing::random_model(rng, 1 + t % 3, 0.05);
    const Superoperator g = build_generator(m);
    for (const auto& p : all_paulis(m.num_qubits())) {
      for (const auto& q : all_paulis(m.num_qubits())) {
        ASSERT_NEAR(transition_amplitude(m, p, q), g.entry(q, p), 1e-12);
      }
    }
  }
}

TEST(TransitionAmplitude, HamiltonianOnlyIsAntisymmetric) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    const NoiseModel m = testing::random_hamiltonian_model(rng, 1 + t % 3, 0.05);
    const Eigen::MatrixXd g = build_generator(m).matrix;
    EXPECT_LT((g + g.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

// Antisymmetry of anticommuting pairs does not extend to dissipative models:
// a jump mixing two Paulis makes the pair symmetric (dense numpy reference).
TEST(TransitionAmplitude, AnticommutingPairsNotAntisymmetricWithJumps) {
  const double c = std::sqrt(0.005);
  const NoiseModel mixed(ConnectivityGraph::line(1), {},
                         {LindbladJump{0, {{P("X"), c}, {P("Z"), c}}}}, 1);
  EXPECT_NEAR(transition_amplitude(mixed, P("X"), P("Z")), 0.01, 1e-15);
  EXPECT_NEAR(transition_amplitude(mixed, P("Z"), P("X")), 0.01, 1e-15);

  // Most random dissipative models break it somewhere.
  std::mt19937_64 rng(9);
  int violations = 0, models = 0;
  for (int t = 0; t < 200; ++t) {
    const NoiseModel m = testing::random_model(rng, 1 + t % 3, 0.05);
    const Superoperator g = build_generator(m);
    double worst = 0.0;
    for (const auto& p : all_paulis(m.num_qubits())) {
      for (const auto& q : all_paulis(m.num_qubits())) {
        if (anticommute(p, q)) worst = std::max(worst, std::abs(g.entry(q, p) + g.entry(p, q)));
      }
    }
    ++models;
    violations += worst > 1e-12;
  }
  EXPECT_GT(violations, models / 2);
  const NoiseModel damping = load_noise_model(CERFOLD_CONFIG_DIR "/ancilla_noise.json");
  EXPECT_GT(transition_amplitude(damping, P("III"), P("IIZ")), 0.0);
  EXPECT_EQ(transition_amplitude(damping, P("IIZ"), P("III")), 0.0);
}

TEST(TransitionAmplitude, DiagonalIsDerivativeOfFidelity) {
  std::mt19937_64 rng(10);
  const double h = 1e-4;
  for (int t = 0; t < 30; ++t) {
    const NoiseModel m = testing::random_model(rng, 1 + t % 2, 0.05);
    const Eigen::MatrixXd g = build_generator(m).matrix;
    const Eigen::MatrixXd plus = expm_taylor(Eigen::MatrixXd(h * g));
    const Eigen::MatrixXd minus = expm_taylor(Eigen::MatrixXd(-h * g));
    for (const auto& p : all_paulis(m.num_qubits())) {
      const auto i = static_cast<Eigen::Index>(p.index());
      const double fd = (plus(i, i) - minus(i, i)) / (2 * h);
      EXPECT_NEAR(transition_amplitude(m, p, p), fd, 1e-6);
    }
  }
}

TEST(ConnectivityGraph, AreaOfEffect) {
  const ConnectivityGraph line = ConnectivityGraph::line(4);
  EXPECT_TRUE(line.is_connected(0b0011));
  EXPECT_FALSE(line.is_connected(0b0101));
  EXPECT_EQ(line.area_of_effect(0b0001), 1);
  EXPECT_EQ(line.area_of_effect(0b0011), 2);
  EXPECT_EQ(line.area_of_effect(0b0101), 3);
  EXPECT_EQ(line.area_of_effect(0b1001), 4);
  const ConnectivityGraph split(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(split.area_of_effect(0b0101), -1);
  EXPECT_THROW(ConnectivityGraph(2, {{0, 0}}), ConfigError);
  EXPECT_THROW(ConnectivityGraph(2, {{0, 2}}), ConfigError);
}

TEST(NoiseModel, LocalityEnforced) {
  const ConnectivityGraph line = ConnectivityGraph::line(3);
  EXPECT_NO_THROW(NoiseModel(line, {{P("ZZI"), 0.1}}, {}, 2));
  EXPECT_THROW(NoiseModel(line, {{P("ZIZ"), 0.1}}, {}, 2), ConfigError);
  EXPECT_THROW(NoiseModel(line, {{P("ZZZ"), 0.1}}, {}, 2), ConfigError);
  EXPECT_NO_THROW(NoiseModel(line, {{P("ZZZ"), 0.1}}, {}, 3));
  const ConnectivityGraph split(3, {{0, 1}});
  EXPECT_THROW(NoiseModel(split, {{P("IZZ"), 0.1}}, {}, 3), ConfigError);
  EXPECT_THROW(NoiseModel(split, {}, {LindbladJump{0, {{P("XIX"), 0.1}}}}, 3), ConfigError);
}

TEST(NoiseModel, RejectsIdentityTermsAndBadValues) {
  const ConnectivityGraph g = ConnectivityGraph::line(1);
  EXPECT_THROW(NoiseModel(g, {{P("I"), 0.1}}, {}, 1), ConfigError);
  EXPECT_THROW(NoiseModel(g, {}, {LindbladJump{0, {{P("I"), 0.1}}}}, 1), ConfigError);
  EXPECT_THROW(NoiseModel(g, {{P("X"), std::nan("")}}, {}, 1), ConfigError);
  EXPECT_THROW(NoiseModel(g, {{P("XX"), 0.1}}, {}, 1), ConfigError);
}

TEST(NoiseModel, MergesDuplicateTerms) {
  const NoiseModel m(ConnectivityGraph::line(1), {{P("Z"), 0.1}, {P("Z"), 0.05}}, {}, 1);
  EXPECT_NEAR(m.hamiltonian_coefficient(P("Z")), 0.15, 1e-15);
}

TEST(RelaxationJumps, Rates) {
  const auto jumps = relaxation_jumps(1, 0, 100.0, 50.0, 0.5, 0);
  const NoiseModel m(ConnectivityGraph::line(1), {}, jumps, 1);
  const Superoperator g = build_generator(m);
  const double g1 = 0.005, gphi = 0.5 * (1.0 / 50.0 - 1.0 / 200.0);
  EXPECT_NEAR(entry(g, "Z", "Z"), -g1, 1e-15);
  EXPECT_NEAR(entry(g, "X", "X"), -(g1 / 2 + gphi), 1e-15);
  EXPECT_THROW(relaxation_jumps(1, 0, 100.0, 201.0, 0.5, 0), ConfigError);
  EXPECT_THROW(relaxation_jumps(1, 0, -1.0, 1.0, 0.5, 0), ConfigError);
}

TEST(Restrict, KeepsInsideTerms) {
  const ConnectivityGraph g = ConnectivityGraph::line(4);
  const NoiseModel m(g, {{P("ZZII"), 0.1}, {P("IIIX"), 0.2}},
                     {LindbladJump{0, {{P("XIII"), 0.1}}}, LindbladJump{1, {{P("IIIZ"), 0.1}}}}, 2);
  const std::vector<int> s01{0, 1};
  const NoiseModel r = restrict(m, s01);
  EXPECT_EQ(r.hamiltonian().size(), 1u);
  EXPECT_EQ(r.hamiltonian()[0].pauli.str(), "ZZII");
  EXPECT_EQ(r.jumps().size(), 1u);
  EXPECT_EQ(r.dropped_terms().size(), 2u);

  const std::vector<int> all{0, 1, 2, 3};
  const NoiseModel same = restrict(m, all);
  EXPECT_EQ(build_generator(same).matrix, build_generator(m).matrix);
  EXPECT_TRUE(same.dropped_terms().empty());

  const NoiseModel none = restrict(m, std::vector<int>{});
  EXPECT_TRUE(none.is_empty());
}

TEST(Restrict, LocalizeGlobalizeRoundTrip) {
  const std::vector<int> support{1, 3};
  const PauliString g = P("IXIZ");
  const PauliString l = localize(g, support);
  EXPECT_EQ(l.str(), "XZ");
  EXPECT_EQ(globalize(l, support, 4), g);
  EXPECT_THROW(localize(P("XXIZ"), support), std::invalid_argument);
}

TEST(NoiseModelJson, RoundTrip) {
  const NoiseModel m = load_noise_model(CERFOLD_CONFIG_DIR "/two_qubit_noise.json");
  const NoiseModel back = parse_noise_model(noise_model_to_json(m));
  EXPECT_EQ(build_generator(back).matrix, build_generator(m).matrix);
}

TEST(NoiseModelJson, ErrorsNameTheKey) {
  auto message = [](const std::string& text) {
    try {
      parse_noise_model(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"n": 1, "hamiltonian": [{"pauli": "Z", "h": "big"}]})")
                .find("hamiltonian[0].h"),
            std::string::npos);
  EXPECT_NE(message(R"({"n": 1, "hamiltonian": [{"pauli": "ZZ", "h": 0.1}]})")
                .find("hamiltonian[0].pauli"),
            std::string::npos);
  EXPECT_NE(message(R"({"hamiltonian": []})").find("'n'"), std::string::npos);
  EXPECT_NE(message(R"({"n": 1, "jumps": [{"terms": [{"pauli": "Q"}]}]})")
                .find("jumps[0].terms[0].pauli"),
            std::string::npos);
  EXPECT_NE(message("{not json").find("invalid JSON"), std::string::npos);
  EXPECT_NE(message(R"({"n": 1, "t1t2": [{"t1": 1.0, "t2": 1.0}]})").find("cycle_time"),
            std::string::npos);
}

}  // namespace
}  // namespace cerfold
