#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fluctnet {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Reservoir {
  int site = 0;
  double gamma = 1.0;
  double temperature = 1.0;
};

// Reservoirs coupled through auxiliary variables r (one per reservoir).
struct QuasiMarkovSpec {
  Mat Lambda;       // |I| x |J|, injective
  Mat iota;         // |J| x |J|, invertible
  Vec temperatures; // |J|
};

// Oscillators are indexed 0..n-1 in the order of omega_sq.
struct NetworkSpec {
  Mat omega_sq;
  std::vector<Reservoir> boundary;
  std::optional<QuasiMarkovSpec> quasi_markov;

  int size() const { return static_cast<int>(omega_sq.rows()); }
};

// Phase space operators. Markovian state is (p, omega q), quasi-Markovian
// state is (r, p, omega q).
struct SystemMatrices {
  int dim = 0;
  Mat A, Q, B, theta;
  Vec vartheta;
  Mat beta;
  Mat omega_skew;
  int sigma = -1;  // theta Q = sigma Q
  bool quasi_markov = false;

  int noise_dim() const { return static_cast<int>(Q.cols()); }
  double theta_min() const { return vartheta.minCoeff(); }
  double theta_max() const { return vartheta.maxCoeff(); }
  Mat vartheta_inv() const { return vartheta.cwiseInverse().asDiagonal(); }
  // Q vartheta^-1 Q*
  Mat dissipation() const { return Q * vartheta_inv() * Q.transpose(); }
  // Sigma_beta = [Omega, beta]
  Mat sigma_beta() const {
    Mat S = omega_skew * beta - beta * omega_skew;
    return 0.5 * (S + S.transpose());
  }
  bool equilibrium(double tol = 1e-14) const {
    return theta_max() - theta_min() <= tol * theta_max();
  }
};

inline bool interaction_graph_connected(const Mat& omega_sq) {
  const int n = static_cast<int>(omega_sq.rows());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (!seen[j] && j != i && omega_sq(i, j) != 0.0) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
    }
  }
  return count == n;
}

inline Mat symmetric_sqrt(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ModelError("omega_sq is not positive definite");
  Mat R = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
          es.eigenvectors().transpose();
  return 0.5 * (R + R.transpose());
}

inline void check_omega_sq(const Mat& W) {
  if (W.rows() == 0 || W.rows() != W.cols()) throw ModelError("omega_sq must be square and non-empty");
  if (!W.allFinite()) throw ModelError("omega_sq has non-finite entries");
  if ((W - W.transpose()).norm() > 1e-12 * (1.0 + W.norm()))
    throw ModelError("omega_sq is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(W);
  if (es.eigenvalues().minCoeff() <= 0.0) throw ModelError("omega_sq is not positive definite");
  if (!interaction_graph_connected(W)) throw ModelError("interaction graph is not connected");
}

inline Mat default_beta(const Mat& Q, const Vec& vartheta) {
  Mat QtQ = Q.transpose() * Q;
  Eigen::LDLT<Mat> ldlt(QtQ);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-14 * (1.0 + QtQ.norm()))
    throw NumericError("Q*Q is singular");
  const int n = static_cast<int>(Q.rows());
  Mat G = ldlt.solve(Q.transpose());  // (Q*Q)^-1 Q*
  Mat b = Q * vartheta.cwiseInverse().asDiagonal() * G + Mat::Identity(n, n) - Q * G;
  return 0.5 * (b + b.transpose());
}

inline Mat default_beta(const SystemMatrices& sys) { return default_beta(sys.Q, sys.vartheta); }

inline void finish_system(SystemMatrices& s) {
  s.dim = static_cast<int>(s.A.rows());
  s.B = s.Q * s.Q.transpose();
  s.omega_skew = 0.5 * (s.A - s.A.transpose());
  s.beta = default_beta(s.Q, s.vartheta);
}

inline SystemMatrices build_markovian(const NetworkSpec& spec) {
  if (spec.quasi_markov) throw ModelError("quasi-Markovian spec passed to build_markovian");
  check_omega_sq(spec.omega_sq);
  if (spec.boundary.empty()) throw ModelError("boundary is empty");
  const int n = spec.size();
  const int m = static_cast<int>(spec.boundary.size());
  std::vector<char> used(n, 0);
  Mat iota = Mat::Zero(n, m);
  Vec temps(m);
  for (int k = 0; k < m; ++k) {
    const auto& r = spec.boundary[k];
    if (r.site < 0 || r.site >= n) throw ModelError("boundary site out of range");
    if (used[r.site]) throw ModelError("duplicate boundary site");
    used[r.site] = 1;
    if (!(r.gamma > 0.0)) throw ModelError("reservoir gamma must be positive");
    if (!(r.temperature > 0.0)) throw ModelError("reservoir temperature must be positive");
    iota(r.site, k) = std::sqrt(2.0 * r.gamma);
    temps(k) = r.temperature;
  }
  Mat w = symmetric_sqrt(spec.omega_sq);
  SystemMatrices s;
  s.A = Mat::Zero(2 * n, 2 * n);
  s.A.topLeftCorner(n, n) = -0.5 * iota * iota.transpose();
  s.A.topRightCorner(n, n) = -w.transpose();
  s.A.bottomLeftCorner(n, n) = w;
  s.Q = Mat::Zero(2 * n, m);
  s.Q.topRows(n) = iota * temps.cwiseSqrt().asDiagonal();
  s.theta = Mat::Identity(2 * n, 2 * n);
  s.theta.topLeftCorner(n, n) *= -1.0;
  s.vartheta = temps;
  s.sigma = -1;
  finish_system(s);
  return s;
}

inline SystemMatrices build_quasi_markovian(const NetworkSpec& spec) {
  if (!spec.quasi_markov) throw ModelError("missing quasi_markov record");
  check_omega_sq(spec.omega_sq);
  const auto& qm = *spec.quasi_markov;
  const int n = spec.size();
  const int j = static_cast<int>(qm.iota.rows());
  if (j == 0) throw ModelError("auxiliary index set is empty");
  if (qm.iota.cols() != j) throw ModelError("iota must be square");
  if (qm.Lambda.rows() != n || qm.Lambda.cols() != j) throw ModelError("Lambda has wrong shape");
  if (qm.temperatures.size() != j) throw ModelError("temperature count mismatch");
  if ((qm.temperatures.array() <= 0.0).any()) throw ModelError("temperatures must be positive");
  Eigen::ColPivHouseholderQR<Mat> ql(qm.Lambda);
  ql.setThreshold(1e-12);
  if (ql.rank() != j) throw ModelError("Lambda is not injective");
  Eigen::FullPivLU<Mat> li(qm.iota);
  li.setThreshold(1e-12);
  if (!li.isInvertible()) throw ModelError("iota is not bijective");
  Mat w = symmetric_sqrt(spec.omega_sq);
  const int d = j + 2 * n;
  SystemMatrices s;
  s.A = Mat::Zero(d, d);
  s.A.block(0, 0, j, j) = -0.5 * qm.iota * qm.iota.transpose();
  s.A.block(0, j, j, n) = -qm.Lambda.transpose();
  s.A.block(j, 0, n, j) = qm.Lambda;
  s.A.block(j, j + n, n, n) = -w.transpose();
  s.A.block(j + n, j, n, n) = w;
  s.Q = Mat::Zero(d, j);
  s.Q.topRows(j) = qm.iota * qm.temperatures.cwiseSqrt().asDiagonal();
  s.theta = Mat::Identity(d, d);
  s.theta.block(j, j, n, n) *= -1.0;
  s.vartheta = qm.temperatures;
  s.sigma = +1;
  s.quasi_markov = true;
  finish_system(s);
  return s;
}

inline SystemMatrices build(const NetworkSpec& spec) {
  return spec.quasi_markov ? build_quasi_markovian(spec) : build_markovian(spec);
}

struct ValidationItem {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  int sigma = 0;
  bool passed = false;

  const ValidationItem* find(const std::string& name) const {
    for (const auto& it : items)
      if (it.name == name) return &it;
    return nullptr;
  }
};

inline ValidationReport validate_structure(const SystemMatrices& s, double tol = 1e-10) {
  ValidationReport rep;
  const int n = static_cast<int>(s.A.rows());
  const double bound = tol * (1.0 + s.A.norm());
  const Mat I = Mat::Identity(n, n);
  const Mat At = s.A.transpose();
  auto add = [&](const std::string& name, double r) {
    rep.items.push_back({name, r, r <= bound});
  };
  add("A + A* = -Q vt^-1 Q*", (s.A + At + s.dissipation()).norm());
  add("theta = theta*", (s.theta - s.theta.transpose()).norm());
  add("theta^2 = I", (s.theta * s.theta - I).norm());
  add("theta A theta = A*", (s.theta * s.A * s.theta - At).norm());
  double rm = (s.theta * s.Q + s.Q).norm();
  double rp = (s.theta * s.Q - s.Q).norm();
  rep.sigma = rp <= rm ? +1 : -1;
  add("theta Q = sigma Q", std::min(rm, rp));
  Mat QtQ = s.Q.transpose() * s.Q;
  Mat V = s.vartheta.asDiagonal();
  add("[vt, Q*Q] = 0", (V * QtQ - QtQ * V).norm());
  {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (QtQ + QtQ.transpose()));
    double lmin = es.eigenvalues().minCoeff();
    rep.items.push_back({"Q*Q > 0", std::max(0.0, -lmin), lmin > bound});
  }
  {
    Mat K(n + s.Q.cols(), n);
    K.topRows(n) = s.A - At;
    K.bottomRows(s.Q.cols()) = s.Q.transpose();
    Eigen::JacobiSVD<Mat> svd(K);
    double smin = svd.singularValues()(n - 1);
    rep.items.push_back({"Ker(A - A*) & Ker Q* = {0}", smin, smin > bound});
  }
  add("beta Q = Q vt^-1", (s.beta * s.Q - s.Q * s.vartheta_inv()).norm());
  add("theta beta theta = beta", (s.theta * s.beta * s.theta - s.beta).norm());
  add("beta = beta*", (s.beta - s.beta.transpose()).norm());
  rep.passed = true;
  for (const auto& it : rep.items) rep.passed = rep.passed && it.pass;
  return rep;
}

// Chain with potential 1/2 sum b_i q_i^2 + sum a_i q_i q_{i+1}, reservoirs at both ends.
inline NetworkSpec jacobi_chain(const Vec& b, const Vec& a, double gamma_first, double gamma_last,
                                double theta_first, double theta_last) {
  const int L = static_cast<int>(b.size());
  if (L < 2 || a.size() != L - 1) throw ModelError("jacobi chain needs L >= 2 and L-1 couplings");
  NetworkSpec spec;
  spec.omega_sq = Mat::Zero(L, L);
  for (int i = 0; i < L; ++i) spec.omega_sq(i, i) = b(i);
  for (int i = 0; i + 1 < L; ++i) spec.omega_sq(i, i + 1) = spec.omega_sq(i + 1, i) = a(i);
  spec.boundary = {{0, gamma_first, theta_first}, {L - 1, gamma_last, theta_last}};
  return spec;
}

inline NetworkSpec homogeneous_chain(int L, double b, double a, double gamma_first,
                                     double gamma_last, double theta_first, double theta_last) {
  return jacobi_chain(Vec::Constant(L, b), Vec::Constant(L - 1, a), gamma_first, gamma_last,
                      theta_first, theta_last);
}

// Six sites on a ring, odd sites coupled to reservoirs and to each other.
inline NetworkSpec triangular_network(double u, double v, double theta_bar = 1.0,
                                      double a = 1.0 / (2.0 * std::sqrt(2.0)), double b = 0.25,
                                      double gamma = 1.0) {
  NetworkSpec spec;
  spec.omega_sq = Mat::Identity(6, 6);
  for (int i = 0; i < 6; ++i) {
    int j = (i + 1) % 6;
    spec.omega_sq(i, j) = spec.omega_sq(j, i) = a;
  }
  for (int i : {1, 3, 5}) {
    int j = (i + 2) % 6;
    spec.omega_sq(i, j) = spec.omega_sq(j, i) = b;
  }
  spec.boundary = {{1, gamma, theta_bar * (1.0 - u)},
                   {3, gamma, theta_bar * (1.0 + 0.5 * (u + 3.0 * v))},
                   {5, gamma, theta_bar * (1.0 + 0.5 * (u - 3.0 * v))}};
  return spec;
}

inline double kappa_zero(const SystemMatrices& s) {
  double lo = s.theta_min(), hi = s.theta_max();
  if (hi - lo <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * (hi + lo) / (hi - lo);
}

}  // namespace fluctnet
