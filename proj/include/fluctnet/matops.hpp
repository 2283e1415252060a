#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace fluctnet {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

inline Mat expm(const Mat& X) {
  if (!X.allFinite()) throw NumericError("expm: non-finite entries");
  if (X.rows() != X.cols()) throw ArgumentError("expm: matrix must be square");
  if (X.size() == 0) return X;
  Mat E = X.exp();
  return E;
}

inline Mat symmetrize(const Mat& X) { return 0.5 * (X + X.transpose()); }

inline double spectral_abscissa(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

// Unique M with A M + M A* + B = 0, A stable.
inline Mat solve_lyapunov(const Mat& A, const Mat& B) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n || B.cols() != n)
    throw ArgumentError("solve_lyapunov: shape mismatch");
  if (spectral_abscissa(A) >= -1e-12 * (1.0 + A.norm()))
    throw NumericError("solve_lyapunov: spectrum of A touches the imaginary axis");
  const int N = n * n;
  Mat I = Mat::Identity(n, n);
  Mat K = Mat::Zero(N, N);
  // vec(AM) = (I (x) A) vec M, vec(M A*) = (A (x) I) vec M
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      if (j == l) K.block(j * n, l * n, n, n) += A;
      K.block(j * n, l * n, n, n) += A(j, l) * I;
    }
  Vec rhs = -Eigen::Map<const Vec>(B.data(), N);
  Eigen::PartialPivLU<Mat> lu(K);
  Vec m = lu.solve(rhs);
  // one step of iterative refinement
  m += lu.solve(rhs - K * m);
  Mat M = Eigen::Map<Mat>(m.data(), n, n);
  return symmetrize(M);
}

inline double lyapunov_residual(const Mat& A, const Mat& M, const Mat& B) {
  return (A * M + M * A.transpose() + B).norm();
}

struct Controllability {
  int rank = 0;
  bool controllable = false;
};

inline Controllability controllability(const Mat& A, const Mat& Q, double tol = 1e-10) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(Q.cols());
  Mat K(n, n * m);
  Mat blk = Q;
  for (int k = 0; k < n; ++k) {
    double nb = blk.norm();
    K.middleCols(k * m, m) = nb > 0 ? Mat(blk / nb) : blk;
    blk = A * K.middleCols(k * m, m);
  }
  Eigen::ColPivHouseholderQR<Mat> qr(K);
  qr.setThreshold(tol);
  Controllability c;
  c.rank = static_cast<int>(qr.rank());
  c.controllable = c.rank == n;
  return c;
}

// Van Loan block exponential on a short step, doubled up to t.
inline Mat finite_time_covariance(const Mat& A, const Mat& B, double t) {
  if (t < 0.0) throw ArgumentError("finite_time_covariance: t < 0");
  const int n = static_cast<int>(A.rows());
  if (t == 0.0) return Mat::Zero(n, n);
  int k = 0;
  double s = t;
  const double an = A.lpNorm<1>() + B.lpNorm<1>();
  while (s * an > 1.0 && k < 60) {
    s *= 0.5;
    ++k;
  }
  Mat H = Mat::Zero(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A;
  H.topRightCorner(n, n) = B;
  H.bottomRightCorner(n, n) = -A.transpose();
  Mat F = expm(s * H);
  Mat E = F.topLeftCorner(n, n);
  Mat Ms = symmetrize(F.topRightCorner(n, n) * E.transpose());
  for (int i = 0; i < k; ++i) {
    Ms = symmetrize(Ms + E * Ms * E.transpose());
    E = E * E;
  }
  return Ms;
}

struct InvariantSubspace {
  Mat basis;                     // orthonormal columns
  std::vector<cplx> eigenvalues; // of the restriction
  bool boundary = false;         // near-imaginary cluster was used
  double residual = 0.0;
};

enum class HalfPlane { left, right };

namespace detail {

inline Mat orth_real_span(const CMat& V, int k) {
  Mat R(V.rows(), 2 * V.cols());
  R << V.real(), V.imag();
  Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k);
}

inline Mat sign_function(const Mat& H) {
  Mat Z = H;
  const int n = static_cast<int>(H.rows());
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Mat> lu(Z);
    Mat Zi = lu.inverse();
    double c = std::sqrt(Zi.norm() / Z.norm());
    Mat Zn = 0.5 * (c * Z + Zi / c);
    double d = (Zn - Z).norm();
    Z = Zn;
    if (d <= 1e-14 * Z.norm()) break;
  }
  (void)n;
  return Z;
}

inline InvariantSubspace finish(const Mat& H, Mat basis, bool boundary) {
  InvariantSubspace out;
  Eigen::HouseholderQR<Mat> qr(basis);
  out.basis = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
  Mat R = out.basis.transpose() * H * out.basis;
  out.residual = (H * out.basis - out.basis * R).norm() / (1.0 + H.norm());
  Eigen::EigenSolver<Mat> es(R, false);
  for (int i = 0; i < R.rows(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  out.boundary = boundary;
  return out;
}

}  // namespace detail

// Spectral subspace of the n eigenvalues of a 2n x 2n matrix lying in the chosen
// half plane. With allow_boundary, eigenvalues within cluster_tol * |H| of the
// imaginary axis are resolved by keeping the dominant directions of their
// eigenvectors (Jordan pairs collapse onto a common eigenvector).
inline InvariantSubspace spectral_subspace(const Mat& H, HalfPlane side, double tol = 1e-9,
                                           bool allow_boundary = false,
                                           double cluster_tol = 1e-5) {
  const int N = static_cast<int>(H.rows());
  if (N % 2 != 0 || H.cols() != N) throw ArgumentError("spectral_subspace: need a 2n x 2n matrix");
  const int n = N / 2;
  const double hn = H.norm();
  const double sgn = side == HalfPlane::left ? 1.0 : -1.0;
  Eigen::EigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  CVec lam = es.eigenvalues();
  CMat V = es.eigenvectors();
  const double gap = tol * hn;
  const double ctol = allow_boundary ? std::max(cluster_tol * hn, gap) : gap;
  std::vector<int> inside, near;
  for (int i = 0; i < N; ++i) {
    double r = sgn * lam(i).real();
    if (r < -ctol)
      inside.push_back(i);
    else if (r <= ctol)
      near.push_back(i);
  }
  if (!near.empty() && !allow_boundary) throw SpectralGapError("eigenvalue on the imaginary axis");
  const bool boundary = !near.empty();
  const int k_in = static_cast<int>(inside.size());
  if (k_in > n) throw SpectralGapError("too many eigenvalues in the half plane");
  CMat Vin(N, k_in);
  for (int j = 0; j < k_in; ++j) Vin.col(j) = V.col(inside[j]);

  // conditioning of the selected eigenvectors
  double cond = 1.0;
  if (k_in > 0) {
    Eigen::JacobiSVD<CMat> sv(Vin);
    auto s = sv.singularValues();
    cond = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : INFINITY;
  }
  Mat basis;
  if (k_in == n) {
    if (cond > 1e8) {
      Mat S = detail::sign_function(sgn * -1.0 * H);
      // S = +1 on the chosen half plane after the sign flip
      Mat P = 0.5 * (Mat::Identity(N, N) + S);
      Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeThinU);
      basis = svd.matrixU().leftCols(n);
    } else {
      basis = detail::orth_real_span(Vin, n);
    }
    return detail::finish(H, basis, false);
  }
  if (!boundary) throw SpectralGapError("half plane does not hold exactly n eigenvalues");
  const int k_near = n - k_in;
  CMat Vn(N, near.size());
  for (size_t j = 0; j < near.size(); ++j) Vn.col(j) = V.col(near[j]);
  // project out the strictly inside part, keep dominant cluster directions
  Mat Bin = k_in > 0 ? detail::orth_real_span(Vin, k_in) : Mat(N, 0);
  Mat R(N, 2 * Vn.cols());
  R << Vn.real(), Vn.imag();
  for (int c = 0; c < R.cols(); ++c) {
    if (k_in > 0) R.col(c) -= Bin * (Bin.transpose() * R.col(c));
    double nc = R.col(c).norm();
    if (nc > 0) R.col(c) /= nc;
  }
  Eigen::JacobiSVD<Mat> svd(R, Eigen::ComputeThinU);
  basis.resize(N, n);
  if (k_in > 0) basis.leftCols(k_in) = Bin;
  basis.rightCols(k_near) = svd.matrixU().leftCols(k_near);
  return detail::finish(H, basis, true);
}

inline InvariantSubspace stable_invariant_subspace(const Mat& H, double tol = 1e-9,
                                                   bool allow_boundary = false) {
  return spectral_subspace(H, HalfPlane::left, tol, allow_boundary);
}

}  // namespace fluctnet
