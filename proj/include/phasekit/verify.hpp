#pragma once

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "phasekit/generators.hpp"
#include "phasekit/phase_calculus.hpp"

namespace phasekit {

/// One randomized property suite: named, seeded, counted.
struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::string first_counterexample;
  double seconds = 0.0;

  bool passed() const { return failures == 0; }
};

namespace verify_detail {

using TrialFn = std::function<bool(Rng&, std::string&)>;

inline SuiteResult run_trials(const std::string& name, int trials,
                              std::uint64_t seed, const TrialFn& fn) {
  SuiteResult res;
  res.name = name;
  res.trials = trials;
  const auto t0 = std::chrono::steady_clock::now();
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::string note;
    bool ok = false;
    try {
      ok = fn(rng, note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
      ok = false;
    }
    if (!ok) {
      ++res.failures;
      if (res.first_counterexample.empty()) {
        std::ostringstream os;
        os << "trial " << t << ": " << note;
        res.first_counterexample = os.str();
      }
    }
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace verify_detail

/// Pseudoinverse phase identity: phi_i(C^+) = -phi_{r-i+1}(C), checked both
/// against the formula and against the directly computed phases of pinv(C).
inline SuiteResult suite_pinv_phases(int trials, std::uint64_t seed,
                                     const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "pinv_phases", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 6);
        const int r = gen::uniform_int(rng, 1, n);
        const double c = gen::uniform(rng, -0.6, 0.6);
        const double w = gen::uniform(rng, 0.2, 1.4);
        const ComplexMatrix m =
            (r == n) ? gen::sectorial(n, rng, c - w, c + w)
                     : gen::quasi_sectorial(n, r, rng, c - w, c + w);
        const PhaseList direct = phases_quasi(pinv(m, tol), tol);
        PhaseList formula = pinv_phases(m, tol);
        formula.align_center_to(direct.center);
        const double err =
            verify_detail::max_abs_diff(direct.phases, formula.phases);
        if (err > 1e-6) {
          note = "max phase error " + std::to_string(err);
          return false;
        }
        // Involution through the formula route.
        PhaseList twice = pinv_phases(pinv(m, tol), tol);
        PhaseList base = phases_quasi(m, tol);
        twice.align_center_to(base.center);
        const double err2 =
            verify_detail::max_abs_diff(base.phases, twice.phases);
        if (err2 > 1e-6) {
          note = "involution error " + std::to_string(err2);
          return false;
        }
        return true;
      });
}

/// Cone sum closure: members of C[alpha, beta] with width <= pi stay in the
/// cone under addition.
inline SuiteResult suite_cone_sum(int trials, std::uint64_t seed,
                                  const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "cone_sum", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 6);
        const double alpha = gen::uniform(rng, -2.0, 1.0);
        const double beta = alpha + gen::uniform(rng, 0.3, kPi);
        const PhaseCone cone(alpha, beta);
        const double pad = 1e-3;
        const ComplexMatrix a =
            gen::cone_member(n, rng, alpha + pad, beta - pad);
        const ComplexMatrix b =
            gen::cone_member(n, rng, alpha + pad, beta - pad);
        if (!cone_contains(cone, a, tol) || !cone_contains(cone, b, tol)) {
          note = "generator left the cone";
          return false;
        }
        if (!cone_contains(cone, a + b, tol)) {
          note = "sum left the cone";
          return false;
        }
        return true;
      });
}

/// Compression interlacing (nonzero compressions of sectorial matrices).
inline SuiteResult suite_interlacing(int trials, std::uint64_t seed,
                                     const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "interlacing", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 6);
        const int k = gen::uniform_int(rng, 1, n);
        const double c = gen::uniform(rng, -0.5, 0.5);
        const double w = gen::uniform(rng, 0.2, 1.5);
        const ComplexMatrix m = gen::sectorial(n, rng, c - w, c + w);
        const ComplexMatrix x = gen::gaussian(n, k, rng);
        if (numerical_rank(x, tol) != k) return true;  // skip degenerate draw
        if (!interlace_check(m, x, tol)) {
          note = "interlacing violated (n=" + std::to_string(n) +
                 ", k=" + std::to_string(k) + ")";
          return false;
        }
        return true;
      });
}

/// Generalized Schur complement interlacing for quasi-sectorial matrices.
inline SuiteResult suite_schur(int trials, std::uint64_t seed,
                               const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "schur", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 3, 6);
        const int k = gen::uniform_int(rng, 1, n - 1);
        const double c = gen::uniform(rng, -0.4, 0.4);
        const double w = gen::uniform(rng, 0.2, 1.4);
        const ComplexMatrix m = gen::sectorial(n, rng, c - w, c + w);
        const PhaseList pc = phases_quasi(m, tol);
        PhaseList ps = schur_phases(m, k, tol);
        ps.align_center_to(pc.center);
        const int r = pc.rank;
        const int rh = ps.rank;
        for (int j = 0; j < rh; ++j) {
          if (pc.phases[j] < ps.phases[j] - tol.eps_phase * 10 ||
              ps.phases[j] < pc.phases[r - rh + j] - tol.eps_phase * 10) {
            note = "Schur interlacing violated at j=" + std::to_string(j);
            return false;
          }
        }
        return true;
      });
}

/// Product majorization: eigen count via rank(C^2), branch window, prefix
/// sums, and the endpoint bounds.
inline SuiteResult suite_majorization(int trials, std::uint64_t seed,
                                      const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "majorization", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 6);
        const int ra = gen::uniform_int(rng, 1, n);
        const double ca = gen::uniform(rng, -0.5, 0.5);
        const double wa = gen::uniform(rng, 0.2, 1.4);
        const ComplexMatrix a =
            (ra == n) ? gen::sectorial(n, rng, ca - wa, ca + wa)
                      : gen::quasi_sectorial(n, ra, rng, ca - wa, ca + wa);
        ComplexMatrix b;
        const int kind = gen::uniform_int(rng, 0, 2);
        if (kind == 0) {
          b = gen::sectorial(n, rng, -0.9, 0.9);
        } else if (kind == 1) {
          const int rb = gen::uniform_int(rng, 1, n);
          b = gen::quasi_sectorial(n, rb, rng, -0.8, 0.4);
        } else {
          b = gen::rotated_hermitian(n, rng, gen::uniform(rng, -0.3, 0.3));
        }
        const MajorizationReport rep = product_majorization(a, b, tol);
        if (!rep.eigen_count_consistent) {
          note = "nonzero eigen count != rank((AB)^2)";
          return false;
        }
        if (!rep.holds) {
          note = "majorization prefix sums violated";
          return false;
        }
        if (!rep.corollary_bounds_hold) {
          note = "endpoint bounds violated";
          return false;
        }
        return true;
      });
}

/// Self-majorization (A = I): count equals rank(C).
inline SuiteResult suite_self_majorization(int trials, std::uint64_t seed,
                                           const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "self_majorization", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 6);
        const int kind = gen::uniform_int(rng, 0, 2);
        ComplexMatrix c;
        if (kind == 0) {
          c = gen::sectorial(n, rng, -0.7, 0.8);
        } else if (kind == 1) {
          c = gen::quasi_sectorial(n, gen::uniform_int(rng, 1, n), rng, -0.6,
                                   0.6);
        } else {
          c = gen::rotated_hermitian(n, rng, 0.2);
        }
        const MajorizationReport rep = self_majorization(c, tol);
        if (!rep.eigen_count_consistent) {
          note = "nonzero eigen count != rank(C)";
          return false;
        }
        if (!rep.holds) {
          note = "self-majorization violated";
          return false;
        }
        return true;
      });
}

/// Small phase theorem, both directions: passing cones never make I + AB
/// singular; failing cones admit an explicit singular witness.
inline SuiteResult suite_spt(int trials, std::uint64_t seed,
                             const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "spt", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 5);
        const int ra = gen::uniform_int(rng, 1, n);
        const double ca = gen::uniform(rng, -0.4, 0.4);
        const double wa = gen::uniform(rng, 0.2, 1.0);
        const ComplexMatrix a =
            (ra == n) ? gen::sectorial(n, rng, ca - wa, ca + wa)
                      : gen::quasi_sectorial(n, ra, rng, ca - wa, ca + wa);
        const PhaseList pa = phases_quasi(a, tol);

        // Sufficiency: a cone strictly inside the admissible interval.
        {
          const double margin = gen::uniform(rng, 0.1, 0.4);
          const double lo = -kPi - pa.phi_min() + margin;
          const double hi = kPi - pa.phi_max() - margin;
          if (hi - lo > 0.2) {
            const double al = gen::uniform(rng, lo, hi - 0.1);
            const double be = gen::uniform(rng, al, hi);
            const PhaseCone cone(al, be);
            if (!spt_check(a, cone, tol)) {
              note = "admissible cone rejected";
              return false;
            }
            const ComplexMatrix b = gen::cone_member(n, rng, al, be);
            const ComplexMatrix iab =
                ComplexMatrix::Identity(n, n) + a * b;
            if (sigma_min(iab) <= 1e-8 * (1.0 + (a * b).norm())) {
              note = "I + AB nearly singular despite passing check";
              return false;
            }
          }
        }
        // Necessity: push beta past the boundary and demand a witness.
        {
          const double excess = gen::uniform(rng, 0.05, 0.6);
          const double be = kPi - pa.phi_max() + excess;
          const double al = be - gen::uniform(rng, 0.5, 1.5);
          const PhaseCone cone(al, be);
          if (spt_check(a, cone, tol)) {
            note = "violating cone accepted";
            return false;
          }
          const ComplexMatrix b = spt_witness(a, cone, tol);
          if (!cone_contains(cone, b, tol)) {
            note = "witness left the cone";
            return false;
          }
          const ComplexMatrix iab = ComplexMatrix::Identity(n, n) + a * b;
          if (sigma_min(iab) > 1e-6 * (1.0 + iab.norm())) {
            note = "witness failed to sing I + AB";
            return false;
          }
        }
        return true;
      });
}

/// Balance equivalence on strongly connected graphs: weight-balanced iff the
/// Laplacian classifies quasi-sectorial, never plain semi-sectorial.
inline SuiteResult suite_balance(int trials, std::uint64_t seed,
                                 const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "balance", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 3, 6);
        const bool balanced_draw = gen::uniform_int(rng, 0, 1) == 1;
        const WeightedDigraph g =
            balanced_draw ? gen::balanced_digraph(n, rng)
                          : gen::strongly_connected_digraph(n, rng);
        const bool balanced = is_weight_balanced(g, tol);
        const SectorClass cls =
            classify(laplacian(g).cast<Complex>(), tol);
        const bool quasi = cls.kind == SectorKind::QuasiSectorial;
        if (balanced != quasi) {
          note = std::string("balanced=") + (balanced ? "1" : "0") +
                 " but kind=" + to_string(cls.kind);
          return false;
        }
        if (balanced && cls.kind == SectorKind::SemiSectorial) {
          note = "balanced graph classified merely semi-sectorial";
          return false;
        }
        return true;
      });
}

/// Analytic Laplacian essential phase vs bisection, within 2e-5 + 2e.
inline SuiteResult suite_laplacian_scaling(int trials, std::uint64_t seed,
                                           const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "laplacian_scaling", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 3, 5);
        const WeightedDigraph g = gen::strongly_connected_digraph(n, rng);
        const double analytic = laplacian_essential_phase(g, tol);
        const double e = 1e-5;
        const BisectionResult bi =
            essential_phase(laplacian(g), e, std::nullopt, {}, tol);
        if (std::abs(bi.alpha_star - analytic) > 2e-5 + 2 * e) {
          note = "analytic " + std::to_string(analytic) + " vs bisection " +
                 std::to_string(bi.alpha_star);
          return false;
        }
        return true;
      });
}

/// Diagonally dominant blocks obey the component Laplacian bound.
inline SuiteResult suite_block_bounds(int trials, std::uint64_t seed,
                                      const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "block_bounds", trials, seed, [&](Rng& rng, std::string& note) {
        const int root = gen::uniform_int(rng, 2, 3);
        const int blocks = gen::uniform_int(rng, 1, 2);
        const int bs = gen::uniform_int(rng, 2, 3);
        const WeightedDigraph g =
            gen::spanning_tree_digraph(root, blocks, bs, rng);
        const DirectednessReport rep =
            component_phase_bounds(g, /*run_bisection=*/false, 1e-5, tol);
        for (const auto& blk : rep.blocks) {
          if (blk.index == 0 || blk.size == 1) continue;
          if (blk.scaled_upper > blk.component_bound + 1e-6) {
            note = "block " + std::to_string(blk.index) +
                   " scaled value exceeded the component bound";
            return false;
          }
        }
        return true;
      });
}

/// Sandwich inequality for irreducible M-matrices:
/// max angle(eig) - e <= alpha* <= Perron upper bound + e.
inline SuiteResult suite_sandwich(int trials, std::uint64_t seed,
                                  const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "sandwich", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 5);
        const RealMatrix m =
            gen::m_matrix(n, rng, gen::uniform(rng, 1.05, 1.5));
        const double lower = eigen_angle_lower_bound(m);
        const auto mm = MMatrixForm::try_from(m, tol);
        if (!mm || !mm->irreducible) {
          note = "generator failed to produce an irreducible M-matrix";
          return false;
        }
        const PerronScaling ps = perron_scaling(*mm, tol);
        const double upper = scaled_upper_phase(m, ps.scaling, tol);
        const double e = 1e-4;
        const BisectionResult bi =
            essential_phase(m, e, std::nullopt, {}, tol);
        if (bi.alpha_star < lower - e || bi.alpha_star > upper + e) {
          note = "alpha* " + std::to_string(bi.alpha_star) + " outside [" +
                 std::to_string(lower) + ", " + std::to_string(upper) + "]";
          return false;
        }
        return true;
      });
}

/// Cross-method agreement of the two quasi-sectorial phase routes.
inline SuiteResult suite_congruence_square(int trials, std::uint64_t seed,
                                           const TolerancePolicy& tol = {}) {
  return verify_detail::run_trials(
      "congruence_square", trials, seed, [&](Rng& rng, std::string& note) {
        const int n = gen::uniform_int(rng, 2, 8);
        const double c = gen::uniform(rng, -0.6, 0.6);
        const double w = gen::uniform(rng, 0.2, 1.5);
        const ComplexMatrix m = gen::sectorial(n, rng, c - w, c + w);
        const PhaseList p1 = phases_quasi(m, tol);
        PhaseList p2 = phases_via_congruence_square(m, tol);
        p2.align_center_to(p1.center);
        const double err = verify_detail::max_abs_diff(p1.phases, p2.phases);
        if (err > 1e-6) {
          note = "route disagreement " + std::to_string(err);
          return false;
        }
        return true;
      });
}

inline std::vector<std::string> suite_names() {
  return {"pinv_phases",   "cone_sum",          "interlacing",
          "schur",         "majorization",      "self_majorization",
          "spt",           "balance",           "laplacian_scaling",
          "block_bounds",  "sandwich",          "congruence_square"};
}

inline SuiteResult run_suite(const std::string& name, int trials,
                             std::uint64_t seed,
                             const TolerancePolicy& tol = {}) {
  if (name == "pinv_phases") return suite_pinv_phases(trials, seed, tol);
  if (name == "cone_sum") return suite_cone_sum(trials, seed, tol);
  if (name == "interlacing") return suite_interlacing(trials, seed, tol);
  if (name == "schur") return suite_schur(trials, seed, tol);
  if (name == "majorization") return suite_majorization(trials, seed, tol);
  if (name == "self_majorization") {
    return suite_self_majorization(trials, seed, tol);
  }
  if (name == "spt") return suite_spt(trials, seed, tol);
  if (name == "balance") return suite_balance(trials, seed, tol);
  if (name == "laplacian_scaling") {
    return suite_laplacian_scaling(trials, seed, tol);
  }
  if (name == "block_bounds") return suite_block_bounds(trials, seed, tol);
  if (name == "sandwich") return suite_sandwich(trials, seed, tol);
  if (name == "congruence_square") {
    return suite_congruence_square(trials, seed, tol);
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace phasekit
