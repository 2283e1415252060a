#pragma once

#include <cmath>
#include <limits>

#include "matops.hpp"
#include "network.hpp"

namespace fluctnet {

inline Mat alpha_drift(const SystemMatrices& s, double alpha) {
  return (1.0 - alpha) * s.A - alpha * s.A.transpose();
}

inline Mat alpha_source(const SystemMatrices& s, double alpha) {
  Vec v2 = s.vartheta.cwiseInverse().cwiseAbs2();
  return alpha * (1.0 - alpha) * s.Q * v2.asDiagonal() * s.Q.transpose();
}

inline Mat hamiltonian_matrix(const SystemMatrices& s, double alpha) {
  const int n = s.dim;
  Mat Aa = alpha_drift(s, alpha);
  Mat K(2 * n, 2 * n);
  K.topLeftCorner(n, n) = -Aa;
  K.topRightCorner(n, n) = s.B;
  K.bottomLeftCorner(n, n) = alpha_source(s, alpha);
  K.bottomRightCorner(n, n) = Aa.transpose();
  return K;
}

inline double riccati_residual(const SystemMatrices& s, double alpha, const Mat& X) {
  Mat Aa = alpha_drift(s, alpha);
  return (X * s.B * X - X * Aa - Aa.transpose() * X - alpha_source(s, alpha)).norm();
}

struct RiccatiSolution {
  double alpha = 0.0;
  Mat X, D, Y;
  double residual = 0.0;
  bool boundary = false;  // solved in boundary mode at the edge of the critical interval
  bool has_gap = false;
};

struct RiccatiOptions {
  double axis_tol = 1e-9;
  double boundary_band = 1e-6;  // |alpha - 1/2| within this of kappa_c uses boundary mode
  double max_condition = 1e10;
};

inline bool in_critical_interval(double alpha, double kappa_c, double slack = 1e-12) {
  return std::isinf(kappa_c) || std::abs(alpha - 0.5) <= kappa_c + slack;
}

// Maximal solution only; the graph of X is the invariant subspace of K_alpha
// belonging to its right half plane spectrum.
inline RiccatiSolution maximal_solution_only(const SystemMatrices& s, double alpha, double kappa_c,
                                             const RiccatiOptions& opt = {}) {
  if (!in_critical_interval(alpha, kappa_c, 1e-9))
    throw DomainError("alpha outside the critical interval");
  const int n = s.dim;
  const bool edge = !std::isinf(kappa_c) && std::abs(alpha - 0.5) >= kappa_c - opt.boundary_band;
  Mat K = hamiltonian_matrix(s, alpha);
  InvariantSubspace sub = spectral_subspace(K, HalfPlane::right, opt.axis_tol, edge);
  Mat U = sub.basis.topRows(n);
  Mat V = sub.basis.bottomRows(n);
  Eigen::JacobiSVD<Mat> sv(U);
  double smin = sv.singularValues()(n - 1);
  double cond = smin > 0 ? sv.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
  if (cond > opt.max_condition)
    throw DegenerateSubspaceError("invariant subspace is not a graph", cond);
  Eigen::ColPivHouseholderQR<Mat> qr(U.transpose());
  Mat X = qr.solve(V.transpose()).transpose();
  X = symmetrize(X);
  RiccatiSolution r;
  r.alpha = alpha;
  r.X = X;
  r.D = alpha_drift(s, alpha) - s.B * X;
  r.residual = riccati_residual(s, alpha, X);
  r.boundary = edge;
  return r;
}

inline RiccatiSolution maximal_solution(const SystemMatrices& s, double alpha, double kappa_c,
                                        bool with_gap = true, const RiccatiOptions& opt = {}) {
  RiccatiSolution r = maximal_solution_only(s, alpha, kappa_c, opt);
  if (with_gap) {
    RiccatiSolution c = maximal_solution_only(s, 1.0 - alpha, kappa_c, opt);
    r.Y = symmetrize(r.X + s.theta * c.X * s.theta);
    r.has_gap = true;
  }
  return r;
}

inline Mat gap(const SystemMatrices& s, double alpha, double kappa_c) {
  return maximal_solution(s, alpha, kappa_c, true).Y;
}

// -theta X_{1-alpha} theta
inline Mat minimal_solution(const SystemMatrices& s, double alpha, double kappa_c) {
  return -s.theta * maximal_solution_only(s, 1.0 - alpha, kappa_c).X * s.theta;
}

// dX/dalpha from D* X' + X' D = -(X A_alpha' + A_alpha'* X + C_alpha')
inline Mat riccati_sensitivity(const SystemMatrices& s, const RiccatiSolution& r) {
  Mat dA = -(s.A + s.A.transpose());
  Vec v2 = s.vartheta.cwiseInverse().cwiseAbs2();
  Mat dC = (1.0 - 2.0 * r.alpha) * s.Q * v2.asDiagonal() * s.Q.transpose();
  Mat rhs = r.X * dA + dA.transpose() * r.X + dC;
  return solve_lyapunov(r.D.transpose(), rhs);
}

inline double min_eigenvalue(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double max_eigenvalue(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

}  // namespace fluctnet
