#include <gtest/gtest.h>

#include <fluctnet/cgf.hpp>
#include <fluctnet/riccati.hpp>

#include <algorithm>

#include "fixtures.hpp"

using namespace fluctnet;

namespace {

struct Fixture {
  std::string name;
  SystemMatrices s;
  double kc;
};

std::vector<Fixture> driven() {
  std::vector<Fixture> out;
  for (auto [name, spec] : {std::pair{"two_chain", fixtures::two_chain()},
                            {"four_chain", fixtures::four_chain()},
                            {"triangle", triangular_network(0.4, 0.1)}}) {
    SystemMatrices s = build(spec);
    out.push_back({name, s, critical_kappa(s).kappa_c});
  }
  return out;
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

std::vector<double> sorted_abs_re(const Eigen::VectorXcd& ev) {
  std::vector<double> v;
  for (int i = 0; i < ev.size(); ++i) v.push_back(ev(i).real());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Hamiltonian, AlphaZeroBlocks) {
  SystemMatrices s = build(fixtures::two_chain());
  Mat K = hamiltonian_matrix(s, 0.0);
  const int n = s.dim;
  EXPECT_LE((K.topLeftCorner(n, n) + s.A).norm(), 1e-15);
  EXPECT_LE((K.topRightCorner(n, n) - s.B).norm(), 1e-15);
  EXPECT_LE(K.bottomLeftCorner(n, n).norm(), 1e-15);
  EXPECT_LE((K.bottomRightCorner(n, n) - s.A.transpose()).norm(), 1e-15);
}

TEST(Hamiltonian, HalfIsFourfoldSymmetric) {
  SystemMatrices s = build(triangular_network(0.4, 0.1));
  Eigen::VectorXcd ev = Eigen::EigenSolver<Mat>(hamiltonian_matrix(s, 0.5)).eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    double best = 1e300;
    for (int j = 0; j < ev.size(); ++j) best = std::min(best, std::abs(ev(j) + std::conj(ev(i))));
    EXPECT_LE(best, 1e-8);
  }
}

TEST(Hamiltonian, SpectrumSymmetricInAlpha) {
  SystemMatrices s = build(fixtures::two_chain());
  for (double a : grid(-0.4, 1.4, 10)) {
    auto x = sorted_abs_re(Eigen::EigenSolver<Mat>(hamiltonian_matrix(s, a)).eigenvalues());
    auto y = sorted_abs_re(Eigen::EigenSolver<Mat>(hamiltonian_matrix(s, 1.0 - a)).eigenvalues());
    for (size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], y[i], 1e-8);
  }
}

TEST(Riccati, EndpointSolutions) {
  for (const auto& f : driven()) {
    EXPECT_LE(maximal_solution_only(f.s, 0.0, f.kc).X.norm(), 1e-10) << f.name;
    Mat M = solve_lyapunov(f.s.A, f.s.B);
    Mat X1 = maximal_solution_only(f.s, 1.0, f.kc).X;
    EXPECT_LE((X1 - f.s.theta * M.inverse() * f.s.theta).norm(), 1e-8) << f.name;
  }
}

TEST(Riccati, Equilibrium) {
  SystemMatrices s = build(fixtures::equilibrium_chain(2.5));
  for (double a : {-3.0, -0.5, 0.25, 1.0, 4.0}) {
    RiccatiSolution r = maximal_solution(s, a, kInf);
    EXPECT_LE((r.X - a / 2.5 * Mat::Identity(s.dim, s.dim)).norm(), 1e-8) << a;
    EXPECT_LE((r.Y - Mat::Identity(s.dim, s.dim) / 2.5).norm(), 1e-8) << a;
  }
}

TEST(Riccati, ResidualExamples) {
  SystemMatrices e = build(fixtures::equilibrium_chain(2.0));
  EXPECT_LE(riccati_residual(e, 0.7, 0.35 * Mat::Identity(e.dim, e.dim)), 1e-12);
  SystemMatrices s = build(fixtures::two_chain());
  EXPECT_LE(riccati_residual(s, 0.0, Mat::Zero(s.dim, s.dim)), 1e-15);
  double kc = critical_kappa(s).kappa_c;
  Mat X = maximal_solution_only(s, 0.5, kc).X;
  EXPECT_GT(riccati_residual(s, 0.5, X + 0.1 * Mat::Identity(s.dim, s.dim)), 1e-3);
}

TEST(Riccati, GapPositiveInsideSingularAtEdge) {
  SystemMatrices s = build(fixtures::two_chain());
  double kc = critical_kappa(s).kappa_c;
  EXPECT_GT(min_eigenvalue(gap(s, 0.5, kc)), 1e-3);
  EXPECT_LE(min_eigenvalue(gap(s, 0.5 + kc, kc)), 1e-6);
  EXPECT_LE(min_eigenvalue(gap(s, 0.5 - kc, kc)), 1e-6);
}

TEST(Riccati, OutsideIntervalThrows) {
  SystemMatrices s = build(fixtures::two_chain());
  double kc = critical_kappa(s).kappa_c;
  EXPECT_THROW(maximal_solution_only(s, 0.5 + kc + 0.01, kc), DomainError);
}

TEST(Riccati, PropertySuite) {
  for (const auto& f : driven()) {
    const int n = f.s.dim;
    auto g = grid(0.5 - f.kc, 0.5 + f.kc, 21);
    std::vector<RiccatiSolution> sol;
    Mat X1 = maximal_solution_only(f.s, 1.0, f.kc).X;
    for (double a : g) sol.push_back(maximal_solution(f.s, a, f.kc));
    const double k0 = kappa_zero(f.s);
    for (size_t i = 0; i < g.size(); ++i) {
      const double a = g[i];
      const auto& r = sol[i];
      EXPECT_LE(r.residual, 1e-8 * (1.0 + alpha_source(f.s, a).norm())) << f.name << " " << a;
      // closed loop in the closed left half plane
      EXPECT_LE(spectral_abscissa(r.D), 1e-6) << f.name << " " << a;
      if (a < -1e-9) EXPECT_LT(max_eigenvalue(r.X), 1e-8) << f.name << " " << a;
      if (a > 1e-9) EXPECT_GT(min_eigenvalue(r.X), -1e-8) << f.name << " " << a;
      if (a >= 0.0 && a <= 0.5 + k0)
        EXPECT_GE(min_eigenvalue(r.X - a / f.s.theta_max() * Mat::Identity(n, n)), -1e-8) << f.name << " " << a;
      if (a <= 0.0 && a >= 0.5 - k0)
        EXPECT_GE(min_eigenvalue(r.X - a / f.s.theta_min() * Mat::Identity(n, n)), -1e-8) << f.name << " " << a;
      bool interior = i > 0 && i + 1 < g.size();
      if (interior) EXPECT_GT(min_eigenvalue(r.Y), 0.0) << f.name << " " << a;
      else EXPECT_LE(min_eigenvalue(r.Y), 1e-6) << f.name << " " << a;
      // minimal solution
      Mat Xm = -f.s.theta * maximal_solution_only(f.s, 1.0 - a, f.kc).X * f.s.theta;
      EXPECT_LE(riccati_residual(f.s, a, Xm), 1e-8 * (1.0 + alpha_source(f.s, a).norm())) << f.name;
      // W_alpha = alpha X_1 - X_alpha
      Mat W = a * X1 - r.X;
      if (std::abs(a - 0.5) <= 0.5 - 1e-9) EXPECT_LE(max_eigenvalue(W), 1e-8) << f.name << " " << a;
      if (std::abs(a - 0.5) >= 0.5 + 1e-9) EXPECT_GE(min_eigenvalue(W), -1e-8) << f.name << " " << a;
      EXPECT_GT(min_eigenvalue(r.Y + W), 0.0) << f.name << " " << a;
    }
    // concavity along fixed directions
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 5; ++k) {
      Vec u(n);
      for (int i = 0; i < n; ++i) u(i) = nd(rng);
      u.normalize();
      for (size_t i = 1; i + 1 < g.size(); ++i) {
        double d2 = u.dot(sol[i + 1].X * u) - 2.0 * u.dot(sol[i].X * u) + u.dot(sol[i - 1].X * u);
        EXPECT_LE(d2, 1e-6) << f.name << " " << g[i];
      }
    }
  }
}

TEST(Riccati, ClosedLoopSpectrumFromHamiltonian) {
  SystemMatrices s = build(fixtures::four_chain());
  double kc = critical_kappa(s).kappa_c;
  for (double a : {-1.0, 0.3, 0.5, 1.8}) {
    RiccatiSolution r = maximal_solution_only(s, a, kc);
    auto d = sorted_abs_re(Eigen::EigenSolver<Mat>(r.D).eigenvalues());
    auto k = sorted_abs_re(Eigen::EigenSolver<Mat>(hamiltonian_matrix(s, a)).eigenvalues());
    // the closed loop carries the left half of sp(K_alpha)
    for (size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], k[i], 1e-7) << a;
  }
}

TEST(Riccati, SensitivityMatchesFiniteDifference) {
  SystemMatrices s = build(fixtures::two_chain());
  double kc = critical_kappa(s).kappa_c;
  for (double a : {-0.3, 0.2, 0.9}) {
    RiccatiSolution r = maximal_solution_only(s, a, kc);
    Mat d = riccati_sensitivity(s, r);
    const double h = 1e-5;
    Mat fd = (maximal_solution_only(s, a + h, kc).X - maximal_solution_only(s, a - h, kc).X) / (2 * h);
    EXPECT_LE((d - fd).norm(), 1e-6) << a;
  }
}
