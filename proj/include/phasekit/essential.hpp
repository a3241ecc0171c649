#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "phasekit/sectorial.hpp"

namespace phasekit {

/// M = s I - A with A entrywise nonnegative and s >= rho(A).
struct MMatrixForm {
  double s = 0.0;
  RealMatrix a;
  bool irreducible = false;

  /// Recognize an M-matrix (nonpositive off-diagonal, s >= rho(A)).
  static std::optional<MMatrixForm> try_from(const RealMatrix& m,
                                             const TolerancePolicy& tol = {});
  static MMatrixForm from_matrix(const RealMatrix& m,
                                 const TolerancePolicy& tol = {}) {
    auto mm = try_from(m, tol);
    if (!mm) throw DomainError("matrix is not an M-matrix");
    return *mm;
  }
};

/// Strictly positive diagonal scaling, normalized to sum(d) = n.
struct ScalingVector {
  RealVector d;

  void normalize() {
    const double s = d.sum();
    if (!(s > 0.0)) throw NumericError("scaling vector must be positive");
    d *= static_cast<double>(d.size()) / s;
  }
};

namespace detail {

// Strong connectivity of the nonzero pattern: forward and backward
// reachability from node 0.
inline bool pattern_strongly_connected(const RealMatrix& a, double thr) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return false;
  auto reach = [&](bool transpose) {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        const double w = transpose ? a(v, u) : a(u, v);
        if (!seen[static_cast<size_t>(v)] && std::abs(w) > thr) {
          seen[static_cast<size_t>(v)] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reach(false) && reach(true);
}

// Deterministic power iteration for the Perron pair of a nonnegative
// irreducible matrix; a positive shift makes the iteration primitive.
struct PowerResult {
  double rho = 0.0;
  RealVector vec;
};

inline PowerResult perron_power(const RealMatrix& a, bool transpose) {
  const int n = static_cast<int>(a.rows());
  const RealMatrix m = transpose ? a.transpose() : a;
  const double shift = 1.0 + m.cwiseAbs().rowwise().sum().maxCoeff();
  RealVector v = RealVector::Constant(n, 1.0 / n);
  double rho = 0.0;
  for (int it = 0; it < 200000; ++it) {
    RealVector w = m * v + shift * v;
    const double s = w.lpNorm<1>();
    if (!(s > 0.0)) throw NumericError("power iteration collapsed");
    w /= s;
    const double delta = (w - v).lpNorm<Eigen::Infinity>();
    v = w;
    if (delta < 1e-15) break;
  }
  // Rayleigh-style quotient on the positive vector.
  rho = (m * v).sum() / v.sum();
  if (v.minCoeff() <= 0.0) {
    throw NumericError("Perron vector is not strictly positive");
  }
  PowerResult out;
  out.rho = rho;
  out.vec = v;
  return out;
}

}  // namespace detail

inline std::optional<MMatrixForm> MMatrixForm::try_from(
    const RealMatrix& m, const TolerancePolicy& tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return std::nullopt;
  const int n = static_cast<int>(m.rows());
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double slack = tol.eps_psd * scale;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && m(i, j) > slack) return std::nullopt;
    }
  }
  MMatrixForm out;
  out.s = m.diagonal().maxCoeff();
  out.a = out.s * RealMatrix::Identity(n, n) - m;
  out.a = out.a.cwiseMax(0.0);  // clip rounding-level negatives
  out.irreducible =
      detail::pattern_strongly_connected(out.a, tol.eps_rank * scale);
  const double rho = out.irreducible
                         ? detail::perron_power(out.a, false).rho
                         : std::abs(eigenvalues(out.a.cast<Complex>())
                                        .cwiseAbs()
                                        .maxCoeff());
  if (out.s < rho - tol.eps_psd * std::max(1.0, out.s)) return std::nullopt;
  return out;
}

/// Perron pair data for the scaling d_i ~ x_i / y_i (left over right),
/// which realizes the optimal-sharp-point similarity in the phi(DM)
/// parameterization.
struct PerronScaling {
  double rho = 0.0;
  RealVector left;
  RealVector right;
  ScalingVector scaling;
};

inline PerronScaling perron_scaling(const MMatrixForm& m,
                                    const TolerancePolicy& tol = {}) {
  (void)tol;
  if (!m.irreducible) {
    throw DomainError("Perron scaling requires an irreducible M-matrix");
  }
  PerronScaling out;
  const detail::PowerResult right = detail::perron_power(m.a, false);
  const detail::PowerResult left = detail::perron_power(m.a, true);
  out.rho = right.rho;
  out.right = right.vec;
  out.left = left.vec;
  out.scaling.d = left.vec.cwiseQuotient(right.vec);
  out.scaling.normalize();
  return out;
}

/// phi_max(D M) for D = diag(d); the scaled matrix must classify
/// quasi-sectorial.
inline double scaled_upper_phase(const RealMatrix& m, const ScalingVector& d,
                                 const TolerancePolicy& tol = {}) {
  if (d.d.size() != m.rows()) throw NumericError("scaling size mismatch");
  if (d.d.minCoeff() <= 0.0) throw NumericError("scaling must be positive");
  const ComplexMatrix dm = (d.d.asDiagonal() * m).cast<Complex>();
  try {
    return phases_quasi(dm, tol).phi_max();
  } catch (const DomainError&) {
    throw DomainError("scaled matrix is not quasi-sectorial");
  }
}

/// Options for the projected supergradient feasibility solver.
struct LmiOptions {
  int max_iterations = 2000;
  int restarts = 6;        // d = 1 plus Dirichlet draws
  int stall_window = 150;  // iterations without improvement before giving up
  std::uint64_t seed = 0;
};

/// Feasibility outcome of one LMI subproblem.
struct LmiResult {
  bool feasible = false;
  RealVector d;
  double margin = 0.0;  // best lambda_min(F(d)) seen
  int iterations = 0;
  bool max_iterations_hit = false;
};

namespace detail {

// Euclidean projection onto {d >= 0, sum(d) = n} by sort-and-threshold.
inline RealVector project_simplex(RealVector d) {
  const int n = static_cast<int>(d.size());
  std::vector<double> u(d.data(), d.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, tau = 0.0;
  int k = 0;
  double running = 0.0;
  for (int i = 0; i < n; ++i) {
    running += u[static_cast<size_t>(i)];
    const double t = (running - n) / (i + 1);
    if (u[static_cast<size_t>(i)] - t > 0.0) {
      k = i + 1;
      css = running;
    }
  }
  tau = (css - n) / k;
  for (int i = 0; i < n; ++i) d(i) = std::max(d(i) - tau, 0.0);
  return d;
}

inline ComplexMatrix lmi_pencil(const RealMatrix& m, const RealVector& d,
                                double cot_beta) {
  const Complex w(1.0, cot_beta);
  const ComplexMatrix dm = (d.asDiagonal() * m).cast<Complex>();
  return w * dm + std::conj(w) * dm.adjoint();
}

}  // namespace detail

/// Feasibility of (1 + j cot(beta)) D M + (1 - j cot(beta)) M^T D >= 0 over
/// strictly positive diagonal D, decided by maximizing lambda_min over the
/// simplex with Polyak-step projected supergradient ascent.  The concave
/// objective means a certificate d with nonnegative margin settles the
/// question; an exhausted budget reports infeasible-with-gap.
inline LmiResult lmi_feasible(const RealMatrix& m, double beta,
                              const LmiOptions& opts = {},
                              const TolerancePolicy& tol = {}) {
  if (m.rows() != m.cols() || !m.allFinite()) {
    throw NumericError("LMI requires a finite square real matrix");
  }
  if (!(beta > 0.0) || beta > kPi / 2.0 + 1e-15) {
    throw DomainError("beta must lie in (0, pi/2]");
  }
  const int n = static_cast<int>(m.rows());
  const double cot_beta = std::cos(beta) / std::sin(beta);

  std::mt19937_64 rng(opts.seed);
  std::gamma_distribution<double> gamma1(1.0, 1.0);
  auto dirichlet = [&] {
    RealVector d(n);
    for (int i = 0; i < n; ++i) d(i) = std::max(gamma1(rng), 1e-12);
    d *= n / d.sum();
    return d;
  };

  LmiResult best;
  best.margin = -std::numeric_limits<double>::infinity();
  best.d = RealVector::Constant(n, 1.0);
  int total_iter = 0;

  bool feasible_hit = false;
  double accept_seen = 0.0;
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    RealVector d =
        restart == 0 ? RealVector::Constant(n, 1.0) : dirichlet();
    int last_improve = 0;
    bool stalled = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      ++total_iter;
      const ComplexMatrix f = detail::lmi_pencil(m, d, cot_beta);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(f);
      const double fval = es.eigenvalues()(0);
      if (fval > best.margin + std::max(1e-14, 1e-7 * std::abs(best.margin))) {
        last_improve = it;
      }
      if (fval > best.margin) {
        best.margin = fval;
        best.d = d;
      }
      const double accept = -tol.eps_psd * std::max(1.0, f.norm());
      accept_seen = accept;
      if (best.margin >= accept) {
        feasible_hit = true;
        break;
      }
      // A truly infeasible subproblem keeps best.margin below the maximum
      // forever, so an ascent that stops improving has settled the sign.
      if (it - last_improve > opts.stall_window) {
        stalled = true;
        break;
      }
      // Supergradient of lambda_min at the bottom eigenvector v:
      // g_i = 2 Re[(1 + j cot b) conj(v_i) (M v)_i].
      const ComplexVector v = es.eigenvectors().col(0);
      const ComplexVector mv = m.cast<Complex>() * v;
      RealVector g(n);
      const Complex w(1.0, cot_beta);
      for (int i = 0; i < n; ++i) {
        g(i) = 2.0 * std::real(w * std::conj(v(i)) * mv(i));
      }
      const double gn2 = g.squaredNorm();
      if (gn2 < 1e-300) break;
      d = detail::project_simplex(d + (-fval / gn2) * g);
    }
    if (feasible_hit) break;
    // Further restarts only pay off when the stall is ambiguous; a margin
    // far below the acceptance level is decided.
    if (stalled && best.margin < 1e3 * accept_seen) break;
  }
  best.iterations = total_iter;

  const double accept_at = [&] {
    const ComplexMatrix f = detail::lmi_pencil(m, best.d, cot_beta);
    return -tol.eps_psd * std::max(1.0, f.norm());
  }();
  if (best.margin >= accept_at) {
    // The cone demands strictly positive d: blend toward the uniform
    // vector, growing the blend while the certificate still verifies.
    RealVector d_ok = best.d;
    bool have_ok = best.d.minCoeff() > 0.0;
    for (double delta = 1e-8; delta <= 1e-2; delta *= 10.0) {
      RealVector cand =
          (1.0 - delta) * best.d + delta * RealVector::Constant(n, 1.0);
      cand *= n / cand.sum();
      const ComplexMatrix f = detail::lmi_pencil(m, cand, cot_beta);
      if (lambda_min(f) >= -tol.eps_psd * std::max(1.0, f.norm())) {
        d_ok = cand;
        have_ok = true;
      } else {
        break;
      }
    }
    if (have_ok) {
      best.feasible = true;
      best.d = d_ok;
      return best;
    }
  }
  best.feasible = false;
  best.max_iterations_hit = true;
  return best;
}

/// Feasibility of D M symmetric positive semidefinite (the alpha* = 0
/// shortcut).  The symmetry constraints d_i M_ij = d_j M_ji pin d up to one
/// scale per connected component of the support pattern, so the question is
/// decided exactly by propagation plus one PSD test.
inline LmiResult positivity_feasible(const RealMatrix& m,
                                     const TolerancePolicy& tol = {}) {
  if (m.rows() != m.cols() || !m.allFinite()) {
    throw NumericError("positivity test requires a finite square real matrix");
  }
  const int n = static_cast<int>(m.rows());
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double zero_thr = tol.eps_rank * scale;

  LmiResult out;
  out.d = RealVector::Constant(n, 1.0);
  RealVector d = RealVector::Zero(n);
  for (int root = 0; root < n; ++root) {
    if (d(root) != 0.0) continue;
    d(root) = 1.0;
    std::vector<int> stack = {root};
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const bool ij = std::abs(m(i, j)) > zero_thr;
        const bool ji = std::abs(m(j, i)) > zero_thr;
        if (!ij && !ji) continue;
        if (ij != ji) return out;  // one-sided coupling: d_i M_ij = 0 impossible
        const double ratio = d(i) * m(i, j) / m(j, i);
        if (d(j) == 0.0) {
          if (ratio <= 0.0) return out;  // sign flip
          d(j) = ratio;
          stack.push_back(j);
        } else if (std::abs(d(j) - ratio) >
                   1e-8 * std::max(std::abs(d(j)), std::abs(ratio))) {
          return out;  // inconsistent cycle
        }
      }
    }
  }
  RealVector dn = d;
  dn *= n / dn.sum();
  const RealMatrix dm = dn.asDiagonal() * m;
  const RealMatrix sym = (dm + dm.transpose()) / 2.0;
  if (lambda_min(sym.cast<Complex>()) >=
      -tol.eps_psd * std::max(1.0, sym.norm())) {
    out.feasible = true;
    out.d = dn;
    out.margin = lambda_min(sym.cast<Complex>());
  }
  return out;
}

/// Optional caller-supplied bisection bracket for non-M-matrix inputs.
struct PhaseBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bisection record: final alpha*, the bracket history, and the feasibility
/// certificate at the returned upper bracket.
struct BisectionResult {
  double alpha_star = 0.0;
  std::vector<std::pair<double, double>> bracket;
  RealVector d_star;
  int iterations = 0;
  std::vector<LmiResult> inner_status;
  std::string status;
};

/// Essential phase of a real square matrix by bisection over the LMI
/// feasibility subproblem.  M-matrices get their upper bound from the
/// Perron scaling automatically; other inputs must supply bounds.
inline BisectionResult essential_phase(
    const RealMatrix& m, double accuracy,
    std::optional<PhaseBounds> bounds = std::nullopt,
    const LmiOptions& opts = {}, const TolerancePolicy& tol = {}) {
  if (!(accuracy > 0.0)) throw std::invalid_argument("accuracy must be positive");
  BisectionResult out;

  const LmiResult shortcut = positivity_feasible(m, tol);
  if (shortcut.feasible) {
    out.alpha_star = 0.0;
    out.d_star = shortcut.d;
    out.status = "positivity-shortcut";
    return out;
  }

  double lo = 0.0, hi = 0.0;
  if (bounds) {
    lo = bounds->lower;
    hi = bounds->upper;
    out.d_star = RealVector::Constant(m.rows(), 1.0);
    out.status = "bisection-caller-bounds";
  } else {
    const auto mm = MMatrixForm::try_from(m, tol);
    if (!mm || !mm->irreducible) {
      throw DomainError(
          "no automatic upper bound: matrix is not an irreducible M-matrix; "
          "supply explicit bounds");
    }
    const PerronScaling ps = perron_scaling(*mm, tol);
    hi = scaled_upper_phase(m, ps.scaling, tol);
    out.d_star = ps.scaling.d;
    out.status = "bisection-perron-bound";
  }
  if (!(hi > lo)) {
    out.alpha_star = hi;
    return out;
  }

  out.bracket.emplace_back(lo, hi);
  while (hi - lo >= accuracy) {
    const double beta = (hi + lo) / 2.0;
    LmiResult inner = lmi_feasible(m, beta, opts, tol);
    if (inner.feasible) {
      hi = beta;
      out.d_star = inner.d;
    } else {
      lo = beta;
    }
    inner.d = RealVector();  // keep the log light; d_star carries the certificate
    out.inner_status.push_back(std::move(inner));
    out.bracket.emplace_back(lo, hi);
    ++out.iterations;
  }
  out.alpha_star = hi;
  return out;
}

/// max_i angle(lambda_i(M)), a lower bound for the essential phase.
inline double eigen_angle_lower_bound(const RealMatrix& m) {
  const ComplexVector lam = eigenvalues(m.cast<Complex>());
  double best = 0.0;
  bool first = true;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double a = std::arg(lam(i));
    if (first || a > best) {
      best = a;
      first = false;
    }
  }
  return lam.size() == 0 ? 0.0 : best;
}

}  // namespace phasekit
