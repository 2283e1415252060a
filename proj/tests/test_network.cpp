#include <gtest/gtest.h>

#include <fluctnet/matops.hpp>
#include <fluctnet/network.hpp>

#include "fixtures.hpp"

using namespace fluctnet;

namespace {

bool brute_connected(const Mat& W) {
  const int n = static_cast<int>(W.rows());
  // transitive closure
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i][j] = (i == j) || W(i, j) != 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r[i][j] = r[i][j] || (r[i][k] && r[k][j]);
  for (int j = 0; j < n; ++j)
    if (!r[0][j]) return false;
  return true;
}

}  // namespace

TEST(Network, TwoChainLayout) {
  SystemMatrices s = build(fixtures::two_chain());
  ASSERT_EQ(s.dim, 4);
  EXPECT_EQ(s.noise_dim(), 2);
  EXPECT_EQ(s.sigma, -1);
  EXPECT_NEAR(s.A(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(s.Q(0, 0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.Q(1, 1), std::sqrt(6.0), 1e-15);
  EXPECT_TRUE(validate_structure(s).passed);
}

TEST(Network, SingleOscillatorBeta) {
  SystemMatrices s = build(fixtures::single_oscillator(2.0));
  Mat expect = Vec((Vec(2) << 0.5, 1.0).finished()).asDiagonal();
  EXPECT_LE((s.beta - expect).norm(), 1e-14);
}

TEST(Network, TwoChainBeta) {
  SystemMatrices s = build(fixtures::two_chain());
  Mat expect = Vec((Vec(4) << 1.0, 1.0 / 3.0, 1.0, 1.0).finished()).asDiagonal();
  EXPECT_LE((s.beta - expect).norm(), 1e-14);
}

TEST(Network, SigmaBetaIsThetaOdd) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    SystemMatrices s = build(fixtures::random_markovian(rng, 2 + k % 5));
    Mat S = s.sigma_beta();
    EXPECT_LE((s.theta * S * s.theta + S).norm(), 1e-12 * (1.0 + S.norm()));
  }
}

TEST(Network, DisconnectedRejected) {
  NetworkSpec n;
  n.omega_sq = Mat::Identity(3, 3);
  n.omega_sq(0, 1) = n.omega_sq(1, 0) = 0.3;
  n.boundary = {{0, 1.0, 1.0}};
  EXPECT_THROW(build(n), ModelError);
}

TEST(Network, NotPositiveDefiniteRejected) {
  NetworkSpec n = fixtures::two_chain();
  n.omega_sq(0, 1) = n.omega_sq(1, 0) = 3.0;
  EXPECT_THROW(build(n), ModelError);
}

TEST(Network, BadReservoirsRejected) {
  NetworkSpec n = fixtures::two_chain();
  n.boundary[1].site = 0;
  EXPECT_THROW(build(n), ModelError);
  n = fixtures::two_chain();
  n.boundary[0].temperature = 0.0;
  EXPECT_THROW(build(n), ModelError);
  n = fixtures::two_chain();
  n.boundary[0].site = 5;
  EXPECT_THROW(build(n), ModelError);
  n = fixtures::two_chain();
  n.boundary.clear();
  EXPECT_THROW(build(n), ModelError);
}

TEST(Network, QuasiMarkovLayout) {
  std::mt19937_64 rng(5);
  SystemMatrices s = build(fixtures::random_quasi_markovian(rng, 3));
  EXPECT_TRUE(s.quasi_markov);
  EXPECT_EQ(s.sigma, 1);
  ValidationReport rep = validate_structure(s);
  EXPECT_TRUE(rep.passed);
  ASSERT_NE(rep.find("theta Q = sigma Q"), nullptr);
  EXPECT_LE(rep.find("theta Q = sigma Q")->residual, 1e-12);
}

TEST(Network, ValidationFlagsBrokenSystem) {
  SystemMatrices s = build(fixtures::two_chain());
  s.A(2, 0) += 0.1;
  ValidationReport rep = validate_structure(s);
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.find("A + A* = -Q vt^-1 Q*")->pass);
}

TEST(Network, RandomStructureResiduals) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 30; ++k) {
    SystemMatrices s = build(fixtures::random_markovian(rng, 1 + k % 6));
    ValidationReport rep = validate_structure(s);
    for (const auto& it : rep.items) EXPECT_TRUE(it.pass) << it.name << " " << it.residual;
  }
  for (int k = 0; k < 10; ++k) {
    SystemMatrices s = build(fixtures::random_quasi_markovian(rng, 2 + k % 4));
    ValidationReport rep = validate_structure(s);
    for (const auto& it : rep.items) EXPECT_TRUE(it.pass) << it.name << " " << it.residual;
  }
}

TEST(Network, ConnectivityMatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 8;
    Mat W = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 4 == 0) W(i, j) = W(j, i) = 0.1;
    EXPECT_EQ(interaction_graph_connected(W), brute_connected(W)) << W;
  }
}

TEST(Network, BuildIsDeterministic) {
  std::mt19937_64 r1(3), r2(3);
  NetworkSpec a = fixtures::random_markovian(r1, 5), b = fixtures::random_markovian(r2, 5);
  SystemMatrices s = build(a), t = build(b);
  EXPECT_TRUE(s.A == t.A);
  EXPECT_TRUE(s.Q == t.Q);
  EXPECT_TRUE(s.beta == t.beta);
}

TEST(Network, TriangularBoundaryTemperatures) {
  NetworkSpec n = triangular_network(0.4, 0.1, 2.0);
  ASSERT_EQ(n.boundary.size(), 3u);
  EXPECT_NEAR(n.boundary[0].temperature, 2.0 * 0.6, 1e-15);
  EXPECT_NEAR(n.boundary[1].temperature, 2.0 * (1.0 + 0.5 * (0.4 + 0.3)), 1e-15);
  EXPECT_NEAR(n.boundary[2].temperature, 2.0 * (1.0 + 0.5 * (0.4 - 0.3)), 1e-15);
  SystemMatrices s = build(n);
  EXPECT_TRUE(validate_structure(s).passed);
  EXPECT_TRUE(controllability(s.A, s.Q).controllable);
}

TEST(Network, KappaZero) {
  EXPECT_NEAR(kappa_zero(build(fixtures::two_chain())), 1.0, 1e-15);
  EXPECT_NEAR(kappa_zero(build(fixtures::four_chain())), 2.0, 1e-15);
  EXPECT_TRUE(std::isinf(kappa_zero(build(fixtures::equilibrium_chain(1.5)))));
}
