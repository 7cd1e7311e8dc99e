// Copyright 2026 The igtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "igtomo/lindblad_generator.hpp"
#include "oracle.hpp"

namespace igtomo {
namespace {

TEST(Lindblad, ConventionStringIsRecorded) {
  EXPECT_NE(std::string(kPauliConvention).find("[[0,0],[1,0]]"), std::string::npos);
  EXPECT_EQ(sigma_minus()(1, 0), cplx(1.0, 0.0));
  EXPECT_EQ(sigma_plus()(0, 1), cplx(1.0, 0.0));
  const Mat2c comm = sigma_minus() * sigma_plus() - sigma_plus() * sigma_minus();
  EXPECT_LT((comm + pauli(2)).norm(), 1e-16);
}

TEST(Lindblad, HamiltonianOnlyGivesRotationGenerator) {
  const auto g = lindblad_to_bloch_generator(LindbladSpec::from_hamiltonian_vector(Vec3(0, 0, 0.7)));
  Mat3 expected;
  expected << 0, -1.4, 0, 1.4, 0, 0, 0, 0, 0;
  EXPECT_LT((g.lambda - expected).norm(), 1e-15);
  EXPECT_EQ(g.c, Vec3::Zero());
  EXPECT_TRUE(is_unital(g));
}

TEST(Lindblad, HermitianJumpsAreUnital) {
  LindbladSpec spec = LindbladSpec::from_hamiltonian_vector(Vec3(0.3, -0.2, 0.1));
  spec.jumps.push_back({pauli(2), 0.4});
  spec.jumps.push_back({pauli(0), 0.1});
  Mat2c h;
  h << 0.3, cplx(0.2, -0.5), cplx(0.2, 0.5), -0.7;
  spec.jumps.push_back({h, 0.25});
  const auto g = lindblad_to_bloch_generator(spec);
  EXPECT_LT(g.c.norm(), 1e-15);
  EXPECT_TRUE(is_unital(g));
}

TEST(Lindblad, AmplitudeDampingAffineTerm) {
  // sigma_- = [[0,0],[1,0]] drives the state to a_z = -1: c = (0, 0, -gamma).
  LindbladSpec spec;
  spec.jumps.push_back({sigma_minus(), 0.8});
  const auto g = lindblad_to_bloch_generator(spec);
  EXPECT_LT((g.c - Vec3(0, 0, -0.8)).norm(), 1e-15);
  EXPECT_FALSE(is_unital(g));
  // Fixed point of a_dot = lambda a + c is the pole the jump drains into.
  const Vec3 fixed = -g.lambda.inverse() * g.c;
  EXPECT_LT((fixed - Vec3(0, 0, -1)).norm(), 1e-14);
}

TEST(Lindblad, GeneratorMatchesDensityMatrixEvolution) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    LindbladSpec spec = LindbladSpec::from_hamiltonian_vector(Vec3(u(gen), u(gen), u(gen)));
    std::vector<oracle::Jump> jumps;
    for (int j = 0; j < 2; ++j) {
      Mat2c l;
      l << cplx(u(gen), u(gen)), cplx(u(gen), u(gen)), cplx(u(gen), u(gen)), cplx(u(gen), u(gen));
      const double rate = 0.5 * (u(gen) + 1.0);
      spec.jumps.push_back({l, rate});
      jumps.push_back({l, rate});
    }
    const auto g = lindblad_to_bloch_generator(spec);
    const Vec3 a0 = oracle::random_state(gen, 0.0, 0.9);
    const Vec3 ref = oracle::evolve_density(spec.hamiltonian, jumps, a0, 1e-3, 500);
    Vec3 a = a0;
    for (int k = 0; k < 500; ++k) a = rk4_step(g, a, 1e-3);
    EXPECT_LT((a - ref).norm(), 1e-12) << trial;
  }
}

TEST(Lindblad, DiagonalDissipationRoundTripsThroughModel) {
  // Pauli jumps with rates g1, g2, g3 give d = (g2 + g3, g1 + g3, g1 + g2).
  GkslModel m;
  m.e = Vec3(1.0, -0.6, 0.4);
  const double g1 = 0.05, g2 = 0.1, g3 = 0.15;
  m.d = Vec3(g2 + g3, g1 + g3, g1 + g2);
  LindbladSpec spec = LindbladSpec::from_hamiltonian_vector(m.e);
  spec.jumps = {{pauli(0), g1}, {pauli(1), g2}, {pauli(2), g3}};
  const auto g = lindblad_to_bloch_generator(spec);
  EXPECT_LT((g.lambda - AffineGenerator::from_model(m).lambda).norm(), 1e-15);
  const Trajectory via_spec = integrate(g, BlochVector(0.815, -0.007, 0.466), 1e-3, 2000);
  const Trajectory via_model = integrate(m, BlochVector(0.815, -0.007, 0.466), 1e-3, 2000);
  for (std::size_t k = 0; k < via_spec.size(); ++k) {
    EXPECT_LT((via_spec.a[k] - via_model.a[k]).norm(), 1e-10);
  }
}

TEST(Lindblad, ApplyMatchesOracleRhs) {
  LindbladSpec spec = LindbladSpec::from_hamiltonian_vector(Vec3(0.2, 0.1, -0.4));
  spec.jumps.push_back({sigma_minus(), 0.3});
  const Mat2c rho = oracle::rho_of(Vec3(0.1, 0.5, -0.3));
  const Mat2c ref = oracle::lindblad_rhs(spec.hamiltonian, {{sigma_minus(), 0.3}}, rho);
  EXPECT_LT((apply_lindbladian(spec, rho) - ref).norm(), 1e-15);
}

TEST(Lindblad, ValidationRejectsBadSpecs) {
  LindbladSpec neg;
  neg.jumps.push_back({pauli(2), -0.1});
  EXPECT_THROW(validate(neg), std::invalid_argument);
  LindbladSpec nonherm;
  nonherm.hamiltonian = sigma_minus();
  EXPECT_THROW(lindblad_to_bloch_generator(nonherm), std::invalid_argument);
}

}  // namespace
}  // namespace igtomo
