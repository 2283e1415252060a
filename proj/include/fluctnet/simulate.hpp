#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "cgf.hpp"
#include "matops.hpp"
#include "network.hpp"

namespace fluctnet {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t k = splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// L with L L* = S for S >= 0; eigenvalues in [-clip, 0) are set to 0
inline Mat psd_factor(const Mat& S, double clip = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(S));
  Vec ev = es.eigenvalues();
  const double floor_ = -clip * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < floor_) throw NumericError("covariance is numerically indefinite");
  return es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

struct StepCache {
  double dt = 0.0;
  Mat Phi;  // e^{dt A}
  Mat Mdt;
  Mat L;    // L L* = M_dt
};

inline StepCache make_step_cache(const SystemMatrices& s, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("dt must be positive");
  StepCache c;
  c.dt = dt;
  c.Phi = expm(dt * s.A);
  c.Mdt = finite_time_covariance(s.A, s.B, dt);
  c.L = psd_factor(c.Mdt);
  return c;
}

inline Vec standard_normal(Rng& rng, int n) {
  std::normal_distribution<double> nd;
  Vec z(n);
  for (int i = 0; i < n; ++i) z(i) = nd(rng);
  return z;
}

inline Vec exact_step(const StepCache& c, const Vec& x, Rng& rng) {
  return c.Phi * x + c.L * standard_normal(rng, static_cast<int>(c.L.cols()));
}

struct FunctionalSample {
  double tde = 0.0;
  double canonical = 0.0;
};

// trapezoid rule for the bulk term, exact boundary terms
inline FunctionalSample accumulate_functionals(const SystemMatrices& s, const std::vector<Vec>& path,
                                               double dt, const Mat& M) {
  FunctionalSample out;
  if (path.size() < 2) return out;
  const Mat Sb = s.sigma_beta();
  const size_t N = path.size() - 1;
  double bulk = 0.0;
  for (size_t k = 0; k <= N; ++k) {
    double w = (k == 0 || k == N) ? 0.5 : 1.0;
    bulk += w * 0.5 * path[k].dot(Sb * path[k]);
  }
  const Vec& x0 = path.front();
  const Vec& xT = path.back();
  out.tde = -dt * bulk - 0.5 * xT.dot(s.beta * xT) + 0.5 * x0.dot(s.beta * x0);
  Eigen::LLT<Mat> llt(M);
  Vec txT = s.theta * xT;
  out.canonical = out.tde + 0.5 * txT.dot(llt.solve(txT)) - 0.5 * x0.dot(llt.solve(x0));
  return out;
}

inline FunctionalSample accumulate_functionals(const SystemMatrices& s, const std::vector<Vec>& path,
                                               double dt) {
  return accumulate_functionals(s, path, dt, solve_lyapunov(s.A, s.B));
}

struct SimulationOptions {
  double t = 1.0;
  double dt = 0.01;
  int n_traj = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  bool keep_states = false;
};

struct TrajectoryBatch {
  std::uint64_t seed = 0;
  int n_traj = 0;
  double t_final = 0.0;
  double dt = 0.0;
  std::vector<double> tde, canonical;
  std::vector<Vec> x0, x_final;
};

inline int step_count(double t, double dt) {
  if (t < 0.0 || !(dt > 0.0)) throw ArgumentError("need t >= 0 and dt > 0");
  double r = t / dt;
  long k = std::lround(r);
  if (std::abs(r - static_cast<double>(k)) > 1e-9 * std::max(1.0, r))
    throw ArgumentError("t must be an integer multiple of dt");
  return static_cast<int>(k);
}

template <class Body>
void parallel_for(int count, int threads, Body&& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

inline TrajectoryBatch simulate_batch(const SystemMatrices& s, const SimulationOptions& opt) {
  const int N = step_count(opt.t, opt.dt);
  if (opt.n_traj <= 0) throw ArgumentError("n_traj must be positive");
  const int n = s.dim;
  const Mat M = solve_lyapunov(s.A, s.B);
  const Mat LM = psd_factor(M);
  const StepCache c = make_step_cache(s, opt.dt);
  const Mat Sb = s.sigma_beta();
  Eigen::LLT<Mat> llt(M);
  const Mat Minv = llt.solve(Mat::Identity(n, n));
  const Mat tMt = s.theta * Minv * s.theta;
  const int r = static_cast<int>(c.L.cols());

  TrajectoryBatch b;
  b.seed = opt.seed;
  b.n_traj = opt.n_traj;
  b.t_final = N * opt.dt;
  b.dt = opt.dt;
  b.tde.assign(opt.n_traj, 0.0);
  b.canonical.assign(opt.n_traj, 0.0);
  if (opt.keep_states) {
    b.x0.assign(opt.n_traj, Vec());
    b.x_final.assign(opt.n_traj, Vec());
  }
  parallel_for(opt.n_traj, opt.threads, [&](int i) {
    Rng rng = trajectory_rng(opt.seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> nd;
    Vec z(std::max(n, r)), x(n), y(n);
    for (int k = 0; k < n; ++k) z(k) = nd(rng);
    x.noalias() = LM * z.head(n);
    const Vec x0 = x;
    double bulk = 0.5 * 0.5 * x.dot(Sb * x);
    for (int step = 1; step <= N; ++step) {
      for (int k = 0; k < r; ++k) z(k) = nd(rng);
      y.noalias() = c.Phi * x;
      y.noalias() += c.L * z.head(r);
      x.swap(y);
      double w = step == N ? 0.5 : 1.0;
      bulk += w * 0.5 * x.dot(Sb * x);
    }
    double tde = -opt.dt * bulk - 0.5 * x.dot(s.beta * x) + 0.5 * x0.dot(s.beta * x0);
    b.tde[i] = tde;
    b.canonical[i] = tde + 0.5 * x.dot(tMt * x) - 0.5 * x0.dot(Minv * x0);
    if (opt.keep_states) {
      b.x0[i] = x0;
      b.x_final[i] = x;
    }
  });
  return b;
}

inline double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -kInf;
  double m = *std::max_element(v.begin(), v.end());
  if (std::isinf(m)) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct CgfEstimate {
  double alpha = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  double ess = 0.0;
  bool low_ess = false;
};

struct SafeBand {
  double lo = -0.2, hi = 1.2;
};

// (1/t) log of the sample mean of exp(-alpha S), delete-one jackknife error
inline CgfEstimate empirical_cgf_single(const std::vector<double>& S, double alpha, double t) {
  const size_t n = S.size();
  if (n < 2) throw ArgumentError("need at least two samples");
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = -alpha * S[i];
  CgfEstimate e;
  e.alpha = alpha;
  const double lse = log_sum_exp(x);
  e.value = (lse - std::log(static_cast<double>(n))) / t;
  std::vector<double> pre(n + 1, -kInf), suf(n + 1, -kInf);
  for (size_t i = 0; i < n; ++i) pre[i + 1] = log_add_exp(pre[i], x[i]);
  for (size_t i = n; i-- > 0;) suf[i] = log_add_exp(suf[i + 1], x[i]);
  const double lnm1 = std::log(static_cast<double>(n - 1));
  double mean = 0.0;
  std::vector<double> loo(n);
  for (size_t i = 0; i < n; ++i) {
    loo[i] = (log_add_exp(pre[i], suf[i + 1]) - lnm1) / t;
    mean += loo[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  e.std_error = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
  double s1 = 0.0, s2 = 0.0;
  for (double v : x) {
    double w = std::exp(v - lse);
    s1 += w;
    s2 += w * w;
  }
  e.ess = s1 * s1 / s2;
  e.low_ess = e.ess < 100.0;
  return e;
}

inline std::vector<CgfEstimate> empirical_cgf(const std::vector<double>& S,
                                              const std::vector<double>& alphas, double t,
                                              SafeBand band = {}) {
  std::vector<CgfEstimate> out;
  for (double a : alphas) {
    if (a < band.lo || a > band.hi) throw ArgumentError("alpha outside the safe band");
    out.push_back(empirical_cgf_single(S, a, t));
  }
  return out;
}

inline std::vector<CgfEstimate> empirical_cgf(const SystemMatrices& s,
                                              const std::vector<double>& alphas, double t,
                                              int n_traj, std::uint64_t seed, double dt = 0.01,
                                              int threads = 1, SafeBand band = {}) {
  for (double a : alphas)
    if (a < band.lo || a > band.hi) throw ArgumentError("alpha outside the safe band");
  SimulationOptions opt;
  opt.t = t;
  opt.dt = dt;
  opt.n_traj = n_traj;
  opt.seed = seed;
  opt.threads = threads;
  TrajectoryBatch b = simulate_batch(s, opt);
  return empirical_cgf(b.canonical, alphas, b.t_final, band);
}

struct JarzynskiCheck {
  double mean = 0.0;
  double std_error = 0.0;
  double z = 0.0;
};

inline JarzynskiCheck jarzynski(const std::vector<double>& S) {
  const double n = static_cast<double>(S.size());
  double m = 0.0;
  for (double v : S) m += std::exp(-v);
  m /= n;
  double ss = 0.0;
  for (double v : S) ss += (std::exp(-v) - m) * (std::exp(-v) - m);
  JarzynskiCheck j;
  j.mean = m;
  j.std_error = std::sqrt(ss / (n - 1.0) / n);
  j.z = j.std_error > 0 ? (m - 1.0) / j.std_error : 0.0;
  return j;
}

enum class PathFunctional { canonical, tde };

// per-node weights W_k with S = 1/2 sum_k x_k.W_k x_k on the uniform grid
inline std::vector<Mat> path_weights(const SystemMatrices& s, int N, double dt, const Mat& M,
                                     PathFunctional kind = PathFunctional::canonical) {
  const Mat Sb = s.sigma_beta();
  std::vector<Mat> W(N + 1);
  for (int k = 0; k <= N; ++k) W[k] = -((k == 0 || k == N) ? 0.5 : 1.0) * dt * Sb;
  W[0] += s.beta;
  W[N] -= s.beta;
  if (kind == PathFunctional::canonical) {
    Mat Minv = M.inverse();
    W[0] -= Minv;
    W[N] += s.theta * Minv * s.theta;
  }
  for (auto& w : W) w = symmetrize(w);
  return W;
}

enum class OracleMethod { recursion, dense };

// g_t(alpha) = (1/t) log E_mu[exp(-alpha S)] for the discretised functional, exact Gaussian
inline double path_oracle_cgf(const SystemMatrices& s, double alpha, double t, int N,
                              OracleMethod method = OracleMethod::recursion,
                              PathFunctional kind = PathFunctional::canonical) {
  if (N <= 0 || !(t > 0.0)) throw ArgumentError("path oracle needs t > 0 and N > 0");
  if (alpha == 0.0) return 0.0;
  const int n = s.dim;
  const double dt = t / N;
  const Mat M = solve_lyapunov(s.A, s.B);
  const StepCache c = make_step_cache(s, dt);
  const Mat LM = psd_factor(M);
  const std::vector<Mat> W = path_weights(s, N, dt, M, kind);
  const int r = static_cast<int>(c.L.cols());

  if (method == OracleMethod::dense) {
    const int D = (N + 1) * n;
    if (D > 4000) throw ArgumentError("dense path oracle limited to (N+1) n <= 4000");
    // x = T w, w standard normal; x_k = Phi^k LM w_0 + sum_{j<k} Phi^{k-1-j} L w_{j+1}
    const int cols = n + N * r;
    Mat T = Mat::Zero(D, cols);
    std::vector<Mat> P(N + 1);
    P[0] = Mat::Identity(n, n);
    for (int k = 1; k <= N; ++k) P[k] = c.Phi * P[k - 1];
    std::vector<Mat> PL(N + 1);
    for (int k = 0; k <= N; ++k) PL[k] = P[k] * c.L;
    for (int k = 0; k <= N; ++k) {
      T.block(k * n, 0, n, n) = P[k] * LM;
      for (int j = 0; j < k; ++j) T.block(k * n, n + j * r, n, r) = PL[k - 1 - j];
    }
    Mat WT(D, cols);
    for (int k = 0; k <= N; ++k) WT.middleRows(k * n, n) = W[k] * T.middleRows(k * n, n);
    Mat H = Mat::Identity(cols, cols);
    H.noalias() += alpha * T.transpose() * WT;
    Eigen::LLT<Mat> llt(symmetrize(H));
    if (llt.info() != Eigen::Success) throw DomainError("I + alpha S is not positive definite");
    double logdet = 2.0 * Mat(llt.matrixL()).diagonal().array().log().sum();
    return -0.5 * logdet / t;
  }

  Mat V = alpha * W[N];
  double logE = 0.0;
  const Mat Ir = Mat::Identity(r, r);
  for (int k = N - 1; k >= 0; --k) {
    Mat VL = V * c.L;
    Mat S = symmetrize(Ir + c.L.transpose() * VL);
    Eigen::LLT<Mat> llt(S);
    if (llt.info() != Eigen::Success) throw DomainError("I + alpha S is not positive definite");
    logE -= Mat(llt.matrixL()).diagonal().array().log().sum();
    Mat Vn = V - VL * llt.solve(VL.transpose());
    V = symmetrize(alpha * W[k] + c.Phi.transpose() * Vn * c.Phi);
  }
  Mat S0 = symmetrize(Mat::Identity(n, n) + LM.transpose() * V * LM);
  Eigen::LLT<Mat> l0(S0);
  if (l0.info() != Eigen::Success) throw DomainError("I + alpha S is not positive definite");
  logE -= Mat(l0.matrixL()).diagonal().array().log().sum();
  return logE / t;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Anderson-Darling A^2 against N(0, 1)
inline double anderson_darling(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const size_t n = z.size();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double lo = std::max(normal_cdf(z[i]), 1e-300);
    double hi = std::max(normal_cdf(-z[n - 1 - i]), 1e-300);
    acc += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

}  // namespace fluctnet
