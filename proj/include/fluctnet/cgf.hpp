#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "matops.hpp"
#include "network.hpp"
#include "riccati.hpp"

namespace fluctnet {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SteadyState {
  Mat M;
  double ep = 0.0;
};

// ep = 1/2 tr(vt^-1 X* M^-1 X vt^-1), X = MQ - Q vt
inline double entropy_production_rate(const SystemMatrices& s, const Mat& M) {
  Eigen::LLT<Mat> llt(M);
  if (llt.info() != Eigen::Success) throw NumericError("M is not positive definite");
  Mat X = M * s.Q - s.Q * s.vartheta.asDiagonal();
  Mat Y = X * s.vartheta_inv();
  double ep = 0.5 * (Y.transpose() * llt.solve(Y)).trace();
  return std::max(ep, 0.0);
}

inline SteadyState steady_state(const SystemMatrices& s) {
  SteadyState st;
  st.M = solve_lyapunov(s.A, s.B);
  st.ep = entropy_production_rate(s, st.M);
  return st;
}

namespace detail {

inline CMat resolvent_times_Q(const SystemMatrices& s, double omega) {
  const int n = s.dim;
  CMat Z = s.A.cast<cplx>();
  Z.diagonal().array() += cplx(0.0, omega);
  Eigen::PartialPivLU<CMat> lu(Z);
  if (!(lu.rcond() > 1e-12)) throw NumericError("near-singular resolvent A + i omega");
  (void)n;
  return lu.solve(s.Q.cast<cplx>());
}

inline double frequency_scale(const SystemMatrices& s) {
  return std::max(1e-3, s.A.norm() / std::sqrt(static_cast<double>(s.dim)));
}

}  // namespace detail

inline CMat e_of_omega(const SystemMatrices& s, double omega) {
  CMat R = detail::resolvent_times_Q(s, omega);
  CMat E = R.adjoint() * s.sigma_beta().cast<cplx>() * R;
  return 0.5 * (E + E.adjoint());
}

// beta independent form: E = I - U*U, U = I + vt^-1 Q*(A + i omega)^-1 Q
inline CMat e_of_omega_unitary_route(const SystemMatrices& s, double omega) {
  const int m = s.noise_dim();
  CMat R = detail::resolvent_times_Q(s, omega);
  CMat U = CMat::Identity(m, m) + s.vartheta_inv().cast<cplx>() * s.Q.transpose().cast<cplx>() * R;
  CMat E = CMat::Identity(m, m) - U.adjoint() * U;
  return 0.5 * (E + E.adjoint());
}

inline Vec e_of_omega_eigenvalues(const SystemMatrices& s, double omega) {
  Eigen::SelfAdjointEigenSolver<CMat> es(e_of_omega(s, omega), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

struct CriticalExponents {
  double eps_minus = 0.0;
  double eps_plus = 0.0;
  double kappa_c = kInf;
  double omega_star = 0.0;
  // every frequency where the top eigenvalue reaches eps_plus
  std::vector<double> omega_peaks;
};

inline CriticalExponents critical_kappa(const SystemMatrices& s, int grid = 2048) {
  const double sc = detail::frequency_scale(s);
  const double lo = std::log(1e-4 * sc), hi = std::log(1e4 * sc);
  std::vector<double> w(grid + 1), f(grid + 1);
  w[0] = 0.0;
  for (int i = 0; i < grid; ++i) w[i + 1] = std::exp(lo + (hi - lo) * i / (grid - 1));
  auto top = [&](double om) { return e_of_omega_eigenvalues(s, om).maxCoeff(); };
  for (size_t i = 0; i < w.size(); ++i) f[i] = top(w[i]);
  const double gmax = *std::max_element(f.begin(), f.end());
  CriticalExponents out;
  if (gmax <= 1e-12) return out;
  double best = gmax, best_w = w[std::max_element(f.begin(), f.end()) - f.begin()];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<std::pair<double, double>> peaks;
  for (size_t i = 0; i < w.size(); ++i) {
    bool left = i == 0 || f[i] >= f[i - 1];
    bool right = i + 1 == w.size() || f[i] >= f[i + 1];
    if (!(left && right) || f[i] < 1e-3 * gmax) continue;
    double a = i == 0 ? 0.0 : w[i - 1];
    double b = i + 1 == w.size() ? w[i] : w[i + 1];
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = top(c), fd = top(d);
    while (b - a > 1e-10 * std::max(1.0, b)) {
      if (fc >= fd) {
        b = d; d = c; fd = fc;
        c = b - phi * (b - a); fc = top(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + phi * (b - a); fd = top(d);
      }
    }
    double xm = 0.5 * (a + b), fm = top(xm);
    if (f[i] > fm) { fm = f[i]; xm = w[i]; }
    peaks.emplace_back(xm, fm);
    if (fm > best) { best = fm; best_w = xm; }
  }
  for (auto [x, v] : peaks)
    if (v >= best * (1.0 - 1e-7)) out.omega_peaks.push_back(x);
  if (out.omega_peaks.empty()) out.omega_peaks.push_back(best_w);
  out.eps_plus = best;
  out.omega_star = best_w;
  out.eps_minus = -best / (1.0 - best);
  out.kappa_c = 1.0 / best - 0.5;
  return out;
}

inline double cgf_spectral(const SystemMatrices& s, double alpha) {
  Eigen::EigenSolver<Mat> es(hamiltonian_matrix(s, alpha), false);
  double sum = es.eigenvalues().real().cwiseAbs().sum();
  return 0.25 * s.dissipation().trace() - 0.25 * sum;
}

inline double cgf_riccati_trace(const SystemMatrices& s, double alpha, double kappa_c) {
  RiccatiSolution r = maximal_solution_only(s, alpha, kappa_c);
  return 0.5 * r.D.trace() + 0.25 * s.dissipation().trace();
}

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

// integral over the whole frequency axis of g(eigenvalues of E(omega)) d omega / 4 pi;
// breaks are frequencies where g may be singular
template <class G>
QuadratureResult frequency_integral(const SystemMatrices& s, G&& g,
                                    const std::vector<double>& breaks = {},
                                    double rel_tol = 1e-11, int max_depth = 18) {
  const double sc = detail::frequency_scale(s);
  auto f = [&](double phi) {
    double c = std::cos(phi);
    double om = sc * std::tan(phi);
    return g(e_of_omega_eigenvalues(s, om)) * sc / (c * c);
  };
  std::vector<double> pts{0.0};
  for (double b : breaks)
    if (b > 0.0 && std::isfinite(b)) pts.push_back(std::atan(b / sc));
  pts.push_back(0.5 * std::numbers::pi);
  std::sort(pts.begin(), pts.end());
  QuadratureResult q;
  boost::math::quadrature::tanh_sinh<double> ts;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    double err = 0.0, l1 = 0.0;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    // roundoff-level integrand: one pass
    double v = GK::integrate(f, pts[i], pts[i + 1], 0, rel_tol, &err, &l1);
    if (l1 > 1e-14) {
      if (pts.size() > 2)
        v = ts.integrate(f, pts[i], pts[i + 1], 1e-10, &err, &l1);
      else
        v = GK::integrate(f, pts[i], pts[i + 1], max_depth, rel_tol, &err, &l1);
    }
    q.value += v;
    q.error += err;
  }
  // even integrand: both half lines
  q.value *= 2.0 / (4.0 * std::numbers::pi);
  q.error *= 2.0 / (4.0 * std::numbers::pi);
  return q;
}

inline QuadratureResult cgf_integral_with_error(const SystemMatrices& s, double alpha,
                                                const std::vector<double>& breaks = {}) {
  auto g = [alpha](const Vec& ev) {
    double acc = 0.0;
    for (int k = 0; k < ev.size(); ++k) {
      double x = -alpha * ev(k);
      if (x < -1.0 - 1e-10) return std::numeric_limits<double>::quiet_NaN();
      acc -= std::log1p(std::max(x, -1.0 + 1e-16));
    }
    return acc;
  };
  return frequency_integral(s, g, breaks);
}

inline double cgf_integral(const SystemMatrices& s, double alpha, double abs_tol = 1e-7,
                           const std::vector<double>& breaks = {}) {
  QuadratureResult q = cgf_integral_with_error(s, alpha, breaks);
  if (!std::isfinite(q.value)) throw DomainError("alpha outside the critical interval");
  if (q.error > abs_tol) throw AccuracyError("cgf quadrature did not converge", q.error);
  return q.value;
}

struct DerivativeValue {
  double value = 0.0;
  double error = 0.0;
  bool near_boundary = false;
};

inline DerivativeValue cgf_derivative(const SystemMatrices& s, double alpha, double kappa_c) {
  if (!std::isinf(kappa_c) && std::abs(alpha - 0.5) >= kappa_c)
    throw DomainError("e' is not finite on or outside the critical boundary");
  auto g = [alpha](const Vec& ev) {
    double acc = 0.0;
    for (int k = 0; k < ev.size(); ++k) acc += ev(k) / (1.0 - alpha * ev(k));
    return acc;
  };
  QuadratureResult q = frequency_integral(s, g);
  DerivativeValue d;
  d.value = q.value;
  d.error = q.error;
  d.near_boundary = !std::isinf(kappa_c) && kappa_c - std::abs(alpha - 0.5) < 1e-3;
  return d;
}

inline double cgf_second_derivative(const SystemMatrices& s, double alpha, double kappa_c) {
  if (!std::isinf(kappa_c) && std::abs(alpha - 0.5) >= kappa_c)
    throw DomainError("e'' is not finite on or outside the critical boundary");
  auto g = [alpha](const Vec& ev) {
    double acc = 0.0;
    for (int k = 0; k < ev.size(); ++k) {
      double r = ev(k) / (1.0 - alpha * ev(k));
      acc += r * r;
    }
    return acc;
  };
  return frequency_integral(s, g).value;
}

// e'(alpha) = 1/2 (tr Q vt^-1 Q* - tr B dX/dalpha)
inline double cgf_derivative_riccati(const SystemMatrices& s, double alpha, double kappa_c) {
  if (!std::isinf(kappa_c) && std::abs(alpha - 0.5) >= kappa_c)
    throw DomainError("e' is not finite on or outside the critical boundary");
  RiccatiSolution r = maximal_solution_only(s, alpha, kappa_c);
  Mat dX = riccati_sensitivity(s, r);
  return 0.5 * (s.dissipation().trace() - (s.B * dX).trace());
}

enum class CgfMethod { integral, spectral, riccati_trace };

struct CgfProfile {
  double eps_minus = 0.0;
  double eps_plus = 0.0;
  double kappa_c = kInf;
  std::vector<double> alpha_grid;
  std::vector<double> e_values;
  std::vector<double> e_prime;
  CgfMethod method = CgfMethod::spectral;
};

inline double cgf_value(const SystemMatrices& s, double alpha, double kappa_c, CgfMethod m) {
  switch (m) {
    case CgfMethod::integral: return cgf_integral(s, alpha);
    case CgfMethod::spectral: return cgf_spectral(s, alpha);
    case CgfMethod::riccati_trace: return cgf_riccati_trace(s, alpha, kappa_c);
  }
  return 0.0;
}

inline CgfProfile cgf_profile(const SystemMatrices& s, const std::vector<double>& alphas,
                              CgfMethod m = CgfMethod::spectral) {
  CgfProfile p;
  CriticalExponents ce = critical_kappa(s);
  p.eps_minus = ce.eps_minus;
  p.eps_plus = ce.eps_plus;
  p.kappa_c = ce.kappa_c;
  p.method = m;
  for (double a : alphas) {
    if (!in_critical_interval(a, p.kappa_c, 1e-12)) throw DomainError("alpha grid leaves the critical interval");
    p.alpha_grid.push_back(a);
    p.e_values.push_back(cgf_value(s, a, p.kappa_c, m));
    bool interior = std::isinf(p.kappa_c) || std::abs(a - 0.5) < p.kappa_c;
    p.e_prime.push_back(interior ? cgf_derivative_riccati(s, a, p.kappa_c)
                                 : std::numeric_limits<double>::quiet_NaN());
  }
  return p;
}

struct Gaussian {
  Vec mean;
  Mat cov;
};

inline Gaussian propagate_gaussian(const SystemMatrices& s, const Vec& mean, const Mat& cov,
                                   double t) {
  if (t < 0.0) throw ArgumentError("propagate_gaussian: t < 0");
  Mat E = expm(t * s.A);
  return {E * mean, symmetrize(E * cov * E.transpose() + finite_time_covariance(s.A, s.B, t))};
}

// Ent(nu1 | nu2) = -KL(nu1 || nu2) <= 0
inline double gaussian_relative_entropy(const Vec& m1, const Mat& c1, const Vec& m2, const Mat& c2) {
  Eigen::LLT<Mat> l2(c2);
  if (l2.info() != Eigen::Success) throw ArgumentError("cov2 must be positive definite");
  Eigen::LDLT<Mat> l1(c1);
  Vec d1 = l1.vectorD();
  if (l1.info() != Eigen::Success || d1.minCoeff() <= 1e-300) return -kInf;
  const double n = static_cast<double>(c1.rows());
  Vec dm = m1 - m2;
  double logdet2 = 2.0 * Mat(l2.matrixL()).diagonal().array().log().sum();
  double logdet1 = d1.array().log().sum();
  double kl = 0.5 * ((l2.solve(c1)).trace() - n + dm.dot(l2.solve(dm)) + logdet2 - logdet1);
  return -kl;
}

}  // namespace fluctnet
