#pragma once

#include <fluctnet/network.hpp>

#include <random>

namespace fixtures {

using fluctnet::Mat;
using fluctnet::NetworkSpec;
using fluctnet::Vec;

inline NetworkSpec two_chain(double t1 = 1.0, double t2 = 3.0) {
  NetworkSpec n;
  n.omega_sq.resize(2, 2);
  n.omega_sq << 2, 1, 1, 2;
  n.boundary = {{0, 1.0, t1}, {1, 1.0, t2}};
  return n;
}

inline NetworkSpec single_oscillator(double temp) {
  NetworkSpec n;
  n.omega_sq = Mat::Constant(1, 1, 1.5);
  n.boundary = {{0, 0.7, temp}};
  return n;
}

inline NetworkSpec four_chain() { return fluctnet::homogeneous_chain(4, 1.0, 0.5, 2.0, 2.0, 3.0, 5.0); }

inline NetworkSpec fig8_chain(double delta) {
  return fluctnet::homogeneous_chain(4, 1.0, 0.5, 2.0 * std::exp(0.5 * delta), 2.0 * std::exp(-0.5 * delta),
                                     3.0, 5.0);
}

inline NetworkSpec equilibrium_chain(double temp) {
  return fluctnet::homogeneous_chain(3, 1.2, 0.4, 1.0, 0.5, temp, temp);
}

// connected ring plus random chords, positive definite, random reservoirs
inline NetworkSpec random_markovian(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Mat W = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) W(i, i + 1) = W(i + 1, i) = u(rng) * (rng() % 2 ? 1 : -1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (rng() % 3 == 0) W(i, j) = W(j, i) = 0.5 * u(rng);
  double shift = 0.0;
  for (int i = 0; i < n; ++i) shift = std::max(shift, W.row(i).cwiseAbs().sum());
  for (int i = 0; i < n; ++i) W(i, i) = shift + u(rng);
  NetworkSpec spec;
  spec.omega_sq = W;
  int k = 1 + static_cast<int>(rng() % std::min(n, 3));
  std::vector<int> sites(n);
  for (int i = 0; i < n; ++i) sites[i] = i;
  std::shuffle(sites.begin(), sites.end(), rng);
  for (int i = 0; i < k; ++i) spec.boundary.push_back({sites[i], 0.5 + u(rng), 0.5 + 2.0 * u(rng)});
  return spec;
}

inline NetworkSpec random_quasi_markovian(std::mt19937_64& rng, int n) {
  NetworkSpec spec = random_markovian(rng, n);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  const int m = 1 + static_cast<int>(rng() % 2);
  fluctnet::QuasiMarkovSpec qm;
  qm.Lambda = Mat::Zero(n, m);
  for (int j = 0; j < m; ++j) {
    qm.Lambda(j % n, j) = 0.5 + u(rng);
    qm.Lambda((j + 1) % n, j) = 0.3 * u(rng);
  }
  qm.iota = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j) qm.iota(j, j) = 0.5 + u(rng);
  qm.temperatures = Vec(m);
  for (int j = 0; j < m; ++j) qm.temperatures(j) = 0.5 + 2.0 * u(rng);
  spec.boundary.clear();
  spec.quasi_markov = qm;
  return spec;
}

}  // namespace fixtures
