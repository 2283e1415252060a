#pragma once

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <optional>
#include <vector>

#include "cgf.hpp"
#include "riccati.hpp"

namespace fluctnet {

enum class FunctionalTag {
  canonical,
  tde_steady,
  tde_transient,
  tde_quasi_markov,
  entropy_production,
  canonical_transient
};

struct FunctionalKind {
  FunctionalTag tag = FunctionalTag::canonical;
  std::optional<Vec> mean;  // initial mean a (does not enter the domain)
  std::optional<Mat> N;     // initial covariance
  std::optional<Mat> F, G;  // explicit boundary forms override the catalogue
};

// Boundary quadratic forms Phi = x.Fx/2 at time t, Psi = x.Gx/2 at time 0, initial covariance N.
struct BoundaryForms {
  Mat F, G, N;
};

inline BoundaryForms boundary_forms(const SystemMatrices& s, const FunctionalKind& kind,
                                    const Mat& M) {
  const int n = s.dim;
  Mat Minv = M.inverse();
  Mat X1 = s.theta * Minv * s.theta;
  Mat tX1t = Minv;
  BoundaryForms b;
  b.N = M;
  switch (kind.tag) {
    case FunctionalTag::canonical:
      b.F = Mat::Zero(n, n);
      b.G = Mat::Zero(n, n);
      break;
    case FunctionalTag::tde_steady:
      b.F = -X1;
      b.G = -tX1t;
      break;
    case FunctionalTag::tde_transient:
      b.F = -X1;
      b.G = -tX1t;
      b.N = Mat::Zero(n, n);
      break;
    case FunctionalTag::tde_quasi_markov: {
      if (!s.quasi_markov) throw ArgumentError("tde_quasi_markov needs a quasi-Markovian system");
      const int j = s.noise_dim();
      Mat R = Mat::Zero(n, n);
      R.topLeftCorner(j, j) = s.vartheta.cwiseInverse().asDiagonal();
      b.F = -X1 + R;
      b.G = -tX1t + R;
      break;
    }
    case FunctionalTag::entropy_production:
      b.F = tX1t - X1;
      b.G = Mat::Zero(n, n);
      break;
    case FunctionalTag::canonical_transient: {
      if (!kind.N) throw ArgumentError("canonical_transient needs an initial covariance");
      Eigen::LLT<Mat> llt(*kind.N);
      if (llt.info() != Eigen::Success) throw ArgumentError("initial covariance must be positive definite");
      Mat Ninv = llt.solve(Mat::Identity(n, n));
      b.N = *kind.N;
      b.F = s.theta * Ninv * s.theta - X1;
      b.G = Ninv - tX1t;
      break;
    }
  }
  if (kind.N && kind.tag != FunctionalTag::canonical_transient) b.N = *kind.N;
  if (kind.F) b.F = *kind.F;
  if (kind.G) b.G = *kind.G;
  return b;
}

struct FunctionalDomain {
  double alpha_minus = 0.0, alpha_plus = 0.0;
  bool minus_closed = false, plus_closed = false;
};

struct DomainOptions {
  int grid = 200;
  double infinite_reach = 20.0;  // search half-width when kappa_c is infinite
};

namespace detail {

struct DomainProbe {
  const SystemMatrices& s;
  double kappa_c;
  BoundaryForms b;
  Mat X1;
  Mat range;  // orthonormal basis of Ran N
  Mat Nhat;
  double thr;

  DomainProbe(const SystemMatrices& sys, double kc, const BoundaryForms& forms, const Mat& M)
      : s(sys), kappa_c(kc), b(forms) {
    X1 = s.theta * M.inverse() * s.theta;
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(b.N));
    const double cut = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<int> keep;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > cut) keep.push_back(i);
    range.resize(s.dim, keep.size());
    Vec d(keep.size());
    for (size_t k = 0; k < keep.size(); ++k) {
      range.col(k) = es.eigenvectors().col(keep[k]);
      d(k) = 1.0 / es.eigenvalues()(keep[k]);
    }
    Nhat = d.asDiagonal();
    thr = 1e-11 * std::max(1.0, X1.norm());
  }

  Mat X(double a) const { return maximal_solution_only(s, a, kappa_c).X; }

  double plus_margin(double a) const {
    return min_eigenvalue(s.theta * X(1.0 - a) * s.theta + a * (X1 + b.F));
  }
  double minus_margin(double a) const {
    if (range.cols() == 0) return kInf;
    Mat T = X(a) - a * (b.G + s.theta * X1 * s.theta);
    return min_eigenvalue(Nhat + range.transpose() * T * range);
  }
  bool ok(double a) const { return plus_margin(a) > thr && minus_margin(a) > thr; }
  double margin(double a) const { return std::min(plus_margin(a), minus_margin(a)); }
};

// zero of the margin near the bisection bracket, to full precision
inline double polish_edge(const DomainProbe& p, double good, double bad, double end) {
  double mg = p.margin(good);
  if (!(mg > 0.0)) return 0.5 * (good + bad);
  double step = bad - good, far = bad, mf = p.margin(far);
  for (int k = 0; k < 40 && mf > 0.0; ++k) {
    step *= 2.0;
    far = good + step;
    if ((end - far) * (end - good) <= 0.0) { far = end; mf = p.margin(far); break; }
    mf = p.margin(far);
  }
  if (mf > 0.0) return 0.5 * (good + bad);
  if (mf == 0.0) return far;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 1);
  std::uintmax_t iters = 100;
  auto f = [&](double a) { return p.margin(a); };
  auto r = good < far ? boost::math::tools::toms748_solve(f, good, far, mg, mf, tol, iters)
                      : boost::math::tools::toms748_solve(f, far, good, mf, mg, tol, iters);
  return std::abs(p.margin(r.first)) <= std::abs(p.margin(r.second)) ? r.first : r.second;
}

// walk from 0 towards the end point, bisect the first failure
inline double domain_edge(const DomainProbe& p, double end, int grid, bool& closed) {
  double good = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double a = end * static_cast<double>(i) / grid;
    if (!p.ok(a)) {
      double bad = a;
      for (int it = 0; it < 80 && std::abs(bad - good) > 1e-13; ++it) {
        double mid = 0.5 * (good + bad);
        (p.ok(mid) ? good : bad) = mid;
      }
      closed = false;
      return polish_edge(p, good, bad, end);
    }
    good = a;
  }
  closed = true;
  return end;
}

}  // namespace detail

inline FunctionalDomain functional_domain(const SystemMatrices& s, const FunctionalKind& kind,
                                          double kappa_c, const Mat& M,
                                          const DomainOptions& opt = {}) {
  FunctionalDomain d;
  const bool finite = !std::isinf(kappa_c);
  if (kind.tag == FunctionalTag::canonical && !kind.F && !kind.G && !kind.N) {
    d.alpha_minus = finite ? 0.5 - kappa_c : -kInf;
    d.alpha_plus = finite ? 0.5 + kappa_c : kInf;
    d.minus_closed = d.plus_closed = finite;
    return d;
  }
  detail::DomainProbe p(s, kappa_c, boundary_forms(s, kind, M), M);
  if (!p.ok(0.0)) throw ResolutionError("functional domain does not contain 0");
  const double hi = finite ? 0.5 + kappa_c : 0.5 + opt.infinite_reach;
  const double lo = finite ? 0.5 - kappa_c : 0.5 - opt.infinite_reach;
  d.alpha_plus = detail::domain_edge(p, hi, opt.grid, d.plus_closed);
  d.alpha_minus = detail::domain_edge(p, lo, opt.grid, d.minus_closed);
  if (!finite) {
    if (d.plus_closed) { d.alpha_plus = kInf; d.plus_closed = false; }
    if (d.minus_closed) { d.alpha_minus = -kInf; d.minus_closed = false; }
  }
  return d;
}

// e and e' with the equilibrium case pinned to zero
struct CgfModel {
  const SystemMatrices& s;
  double kappa_c = kInf;
  double ep = 0.0;
  bool degenerate = false;

  CgfModel(const SystemMatrices& sys, double kc, double ep_) : s(sys), kappa_c(kc), ep(ep_) {
    degenerate = std::isinf(kc);
  }
  double lo() const { return 0.5 - kappa_c; }
  double hi() const { return 0.5 + kappa_c; }
  double e(double a) const { return degenerate ? 0.0 : cgf_spectral(s, a); }
  double de(double a) const { return degenerate ? 0.0 : cgf_derivative_riccati(s, a, kappa_c); }
};

inline CgfModel make_model(const SystemMatrices& s) {
  CriticalExponents ce = critical_kappa(s);
  SteadyState st = steady_state(s);
  return CgfModel(s, ce.kappa_c, st.ep);
}

struct RateValues {
  std::vector<double> values;
  std::vector<double> maximizer;  // beta with e'(beta) = -s
  std::vector<char> clamped;
  bool degenerate = false;
};

// I(s) = sup_beta (-beta s - e(beta)) over the critical interval
inline RateValues rate_function(const CgfModel& m, const std::vector<double>& s_grid,
                                double edge = 1e-5) {
  RateValues r;
  r.degenerate = m.degenerate;
  for (double sv : s_grid) {
    if (m.degenerate) {
      r.values.push_back(sv == 0.0 ? 0.0 : kInf);
      r.maximizer.push_back(0.0);
      r.clamped.push_back(0);
      continue;
    }
    double a = m.lo() + edge, b = m.hi() - edge;
    double fa = m.de(a) + sv, fb = m.de(b) + sv;
    char clamp = 0;
    double beta;
    if (fa >= 0.0) {
      beta = a;
      clamp = 1;
    } else if (fb <= 0.0) {
      beta = b;
      clamp = 1;
    } else {
      for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
        double mid = 0.5 * (a + b);
        (m.de(mid) + sv < 0.0 ? a : b) = mid;
      }
      beta = 0.5 * (a + b);
    }
    r.values.push_back(-beta * sv - m.e(beta));
    r.maximizer.push_back(beta);
    r.clamped.push_back(clamp);
  }
  return r;
}

// brute force sup over a beta grid
inline std::vector<double> rate_function_grid(const CgfModel& m, const std::vector<double>& s_grid,
                                              const std::vector<double>& beta_grid) {
  std::vector<double> ev;
  for (double b : beta_grid) ev.push_back(m.e(b));
  std::vector<double> out;
  for (double sv : s_grid) {
    double best = -kInf;
    for (size_t k = 0; k < beta_grid.size(); ++k) best = std::max(best, -beta_grid[k] * sv - ev[k]);
    out.push_back(best);
  }
  return out;
}

struct ExtendedRate {
  double eta_minus = -kInf, eta_plus = kInf;
  std::vector<double> values;
};

inline ExtendedRate extended_rate(const CgfModel& m, const FunctionalDomain& d,
                                  const std::vector<double>& s_grid) {
  ExtendedRate j;
  const bool plus_finite = !d.plus_closed && std::isfinite(d.alpha_plus);
  const bool minus_finite = !d.minus_closed && std::isfinite(d.alpha_minus);
  if (plus_finite) j.eta_minus = -m.de(d.alpha_plus);
  if (minus_finite) j.eta_plus = -m.de(d.alpha_minus);
  const double ep_ = plus_finite ? m.e(d.alpha_plus) : 0.0;
  const double em_ = minus_finite ? m.e(d.alpha_minus) : 0.0;
  std::vector<double> mid;
  for (double sv : s_grid)
    if (sv > j.eta_minus && sv < j.eta_plus) mid.push_back(sv);
  RateValues I = rate_function(m, mid);
  size_t k = 0;
  for (double sv : s_grid) {
    if (sv <= j.eta_minus)
      j.values.push_back(-sv * d.alpha_plus - ep_);
    else if (sv >= j.eta_plus)
      j.values.push_back(-sv * d.alpha_minus - em_);
    else
      j.values.push_back(I.values[k++]);
  }
  return j;
}

inline std::vector<double> symmetry_function(const std::vector<double>& J,
                                             const std::vector<double>& s_grid) {
  const size_t n = s_grid.size();
  if (J.size() != n) throw ArgumentError("symmetry_function: size mismatch");
  double scale = 0.0;
  for (double v : s_grid) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < n; ++i)
    if (std::abs(s_grid[i] + s_grid[n - 1 - i]) > 1e-12 * std::max(1.0, scale))
      throw ArgumentError("symmetry_function: grid is not symmetric about 0");
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = J[n - 1 - i] - J[i];
  return out;
}

// minimum eigenvalue of X_{1-alpha} + alpha X_1
inline std::vector<double> check_condition_r(const SystemMatrices& s,
                                             const std::vector<double>& alphas, double kappa_c) {
  Mat X1 = maximal_solution_only(s, 1.0, kappa_c).X;
  std::vector<double> out;
  for (double a : alphas)
    out.push_back(min_eigenvalue(maximal_solution_only(s, 1.0 - a, kappa_c).X + a * X1));
  return out;
}

}  // namespace fluctnet
