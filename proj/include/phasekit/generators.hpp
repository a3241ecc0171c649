#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>

#include "phasekit/graphs.hpp"
#include "phasekit/numerics.hpp"

namespace phasekit {

using Rng = std::mt19937_64;

/// Stable per-trial stream: splitmix64 of (seed, index) so trial outcomes
/// do not depend on scheduling order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace gen {

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline ComplexMatrix gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Complex(nd(rng), nd(rng));
    }
  }
  return m;
}

inline ComplexMatrix unitary(int n, Rng& rng) {
  const ComplexMatrix g = gaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Nonsingular with condition number bounded by cond_max.
inline ComplexMatrix nonsingular(int n, Rng& rng, double cond_max = 10.0) {
  const ComplexMatrix u = unitary(n, rng);
  const ComplexMatrix v = unitary(n, rng);
  RealVector s(n);
  for (int i = 0; i < n; ++i) {
    s(i) = std::pow(cond_max, uniform(rng, 0.0, 1.0));
  }
  s /= s.maxCoeff();  // singular values in [1/cond_max, 1]
  return u * s.asDiagonal() * v.adjoint();
}

inline ComplexMatrix hermitian(int n, Rng& rng) {
  const ComplexMatrix g = gaussian(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

/// C = T* diag(e^{j theta_i}) T with theta_i drawn from [lo, hi];
/// sectorial when hi - lo < pi.
inline ComplexMatrix sectorial(int n, Rng& rng, double lo, double hi,
                               double cond_max = 10.0) {
  const ComplexMatrix t = nonsingular(n, rng, cond_max);
  ComplexVector d(n);
  for (int i = 0; i < n; ++i) d(i) = std::polar(1.0, uniform(rng, lo, hi));
  return t.adjoint() * d.asDiagonal() * t;
}

/// Rank-deficient quasi-sectorial: congruence of blkdiag(0, unitary diag).
inline ComplexMatrix quasi_sectorial(int n, int rank, Rng& rng, double lo,
                                     double hi, double cond_max = 10.0) {
  const ComplexMatrix t = nonsingular(n, rng, cond_max);
  ComplexMatrix mid = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < rank; ++i) {
    mid(n - rank + i, n - rank + i) = std::polar(1.0, uniform(rng, lo, hi));
  }
  return t.adjoint() * mid * t;
}

/// Member of the phase cone [alpha, beta] (sectorial interior when the
/// width allows, otherwise the phases are clamped to the closed cone).
inline ComplexMatrix cone_member(int n, Rng& rng, double alpha, double beta,
                                 double cond_max = 10.0) {
  return sectorial(n, rng, alpha, beta, cond_max);
}

/// Rotated-Hermitian matrix e^{j theta0} j H with indefinite H.
inline ComplexMatrix rotated_hermitian(int n, Rng& rng, double theta0) {
  const ComplexMatrix t = nonsingular(n, rng);
  RealVector signs(n);
  for (int i = 0; i < n; ++i) signs(i) = (i % 2 == 0) ? 1.0 : -1.0;
  const ComplexMatrix h =
      t.adjoint() * signs.asDiagonal().toDenseMatrix().cast<Complex>() * t;
  return std::polar(1.0, theta0) * Complex(0.0, 1.0) * h;
}

/// Strongly connected weighted digraph: a random Hamiltonian cycle plus
/// extra edges, weights in [0.2, 2].
inline WeightedDigraph strongly_connected_digraph(int n, Rng& rng,
                                                  int extra_edges = -1) {
  if (extra_edges < 0) extra_edges = n;
  WeightedDigraph g;
  g.n = n;
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> used;
  for (int i = 0; i < n; ++i) {
    const int a = perm[static_cast<size_t>(i)];
    const int b = perm[static_cast<size_t>((i + 1) % n)];
    g.edges.push_back({a, b, uniform(rng, 0.2, 2.0)});
    used.insert({a, b});
  }
  for (int e = 0; e < extra_edges; ++e) {
    const int a = uniform_int(rng, 0, n - 1);
    const int b = uniform_int(rng, 0, n - 1);
    if (a != b && used.insert({a, b}).second) {
      g.edges.push_back({a, b, uniform(rng, 0.2, 2.0)});
    }
  }
  return g;
}

/// Weight-balanced strongly connected digraph: a sum of directed cycles,
/// which balances in- and out-degrees by construction.
inline WeightedDigraph balanced_digraph(int n, Rng& rng, int cycles = 3) {
  WeightedDigraph g;
  g.n = n;
  std::map<std::pair<int, int>, double> acc;
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  for (int c = 0; c < cycles; ++c) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const double w = uniform(rng, 0.2, 2.0);
    for (int i = 0; i < n; ++i) {
      acc[{perm[static_cast<size_t>(i)], perm[static_cast<size_t>((i + 1) % n)]}] += w;
    }
  }
  for (const auto& [key, w] : acc) {
    if (key.first != key.second) g.edges.push_back({key.first, key.second, w});
  }
  return g;
}

/// Graph with a spanning tree: a strongly connected root component plus
/// later components fed from earlier ones.
inline WeightedDigraph spanning_tree_digraph(int root_size, int tail_blocks,
                                             int block_size, Rng& rng) {
  WeightedDigraph g;
  g.n = root_size + tail_blocks * block_size;
  auto add_cycle = [&](int base, int size) {
    for (int i = 0; i < size; ++i) {
      g.edges.push_back({base + i, base + (i + 1) % size,
                         uniform(rng, 0.2, 2.0)});
    }
  };
  add_cycle(0, root_size);
  int base = root_size;
  for (int b = 0; b < tail_blocks; ++b) {
    if (block_size > 1) add_cycle(base, block_size);
    const int from = uniform_int(rng, 0, base - 1);
    g.edges.push_back({from, base + uniform_int(rng, 0, block_size - 1),
                       uniform(rng, 0.2, 2.0)});
    base += block_size;
  }
  return g;
}

/// Irreducible M-matrix s I - A with positive entries and margin above rho(A).
inline RealMatrix m_matrix(int n, Rng& rng, double margin_factor = 1.1) {
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = uniform(rng, 0.05, 1.0);
    }
  }
  const double rho =
      std::abs(eigenvalues(a.cast<Complex>()).cwiseAbs().maxCoeff());
  return margin_factor * rho * RealMatrix::Identity(n, n) - a;
}

}  // namespace gen
}  // namespace phasekit
