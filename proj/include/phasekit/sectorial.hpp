#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "phasekit/numerics.hpp"

namespace phasekit {

inline constexpr double kPi = std::numbers::pi;

/// Wrap an angle into (-pi, pi], ties at the seam resolved toward +pi.
inline double wrap_angle(double a) {
  const double k = std::ceil((a - kPi) / (2.0 * kPi));
  return a - 2.0 * kPi * k;
}

enum class SectorKind {
  Sectorial,
  QuasiSectorial,
  SemiSectorial,
  NotSemiSectorial,
};

inline const char* to_string(SectorKind k) {
  switch (k) {
    case SectorKind::Sectorial: return "Sectorial";
    case SectorKind::QuasiSectorial: return "QuasiSectorial";
    case SectorKind::SemiSectorial: return "SemiSectorial";
    case SectorKind::NotSemiSectorial: return "NotSemiSectorial";
  }
  return "?";
}

/// Closed arc of rotation angles. `lo` is kept in (-pi, pi]; `hi = lo + length`
/// may exceed pi so that a wrapped arc stays a single interval.
struct AngleArc {
  enum class Kind { Empty, Arc, FullCircle };
  Kind kind = Kind::Empty;
  double lo = 0.0;
  double hi = 0.0;

  static AngleArc empty() { return {}; }
  static AngleArc full_circle() { return {Kind::FullCircle, -kPi, kPi}; }
  static AngleArc interval(double lo, double hi) {
    return {Kind::Arc, lo, hi};
  }

  bool is_empty() const { return kind == Kind::Empty; }
  bool is_full() const { return kind == Kind::FullCircle; }
  double length() const {
    if (kind == Kind::Empty) return 0.0;
    if (kind == Kind::FullCircle) return 2.0 * kPi;
    return hi - lo;
  }
  double midpoint() const { return wrap_angle((lo + hi) / 2.0); }

  /// Membership modulo 2*pi with absolute slack.
  bool contains(double a, double slack = 0.0) const {
    if (kind == Kind::Empty) return false;
    if (kind == Kind::FullCircle) return true;
    for (int k = -1; k <= 1; ++k) {
      const double t = a + 2.0 * kPi * k;
      if (t >= lo - slack && t <= hi + slack) return true;
    }
    return false;
  }
};

/// Phases sorted descending together with the phase center and rank.
/// The zero matrix has an empty list; by convention phi_max() = -inf and
/// phi_min() = +inf in that case.
struct PhaseList {
  std::vector<double> phases;  // descending
  double center = 0.0;
  int rank = 0;
  bool approximate = false;
  double error_estimate = 0.0;

  bool empty() const { return phases.empty(); }
  double phi_max() const {
    return phases.empty() ? -std::numeric_limits<double>::infinity()
                          : phases.front();
  }
  double phi_min() const {
    return phases.empty() ? std::numeric_limits<double>::infinity()
                          : phases.back();
  }
  double spread() const { return phases.empty() ? 0.0 : phi_max() - phi_min(); }

  /// Shift the whole list by multiples of 2*pi so the center lands in
  /// (-pi, pi]; keeps the list internally consistent.
  void canonicalize() {
    if (phases.empty()) {
      center = 0.0;
      return;
    }
    std::sort(phases.begin(), phases.end(), std::greater<double>());
    const double gamma = (phases.front() + phases.back()) / 2.0;
    const double shift = wrap_angle(gamma) - gamma;
    if (shift != 0.0) {
      for (double& p : phases) p += shift;
    }
    center = (phases.front() + phases.back()) / 2.0;
    rank = static_cast<int>(phases.size());
  }

  /// Shift by the multiple of 2*pi that brings the center nearest `target`.
  void align_center_to(double target) {
    if (phases.empty()) return;
    const double gamma = (phases.front() + phases.back()) / 2.0;
    const double k = std::round((target - gamma) / (2.0 * kPi));
    if (k != 0.0) {
      for (double& p : phases) p += 2.0 * kPi * k;
      center = (phases.front() + phases.back()) / 2.0;
    }
  }
};

/// Classification verdict per the sectorial / quasi-sectorial /
/// semi-sectorial hierarchy; `kind` records the strongest class that holds.
struct SectorClass {
  SectorKind kind = SectorKind::NotSemiSectorial;
  bool rotated_hermitian = false;
  int rank = 0;
  AngleArc feasible_arc;
};

/// A = (C+C*)/2 and B = (C-C*)/2j, so that C = A + jB with A, B Hermitian.
inline std::pair<ComplexMatrix, ComplexMatrix> hermitian_split(
    const ComplexMatrix& c) {
  require_square(c);
  require_finite(c);
  return {hermitian_part(c), skew_part(c)};
}

namespace detail {

// If A and B span a real line in Hermitian space (C = e^{j theta0} j H),
// returns theta0 in (-pi/2, pi/2] and the common Hermitian direction
// H = cos(theta0) B - sin(theta0) A.  cos(theta0) A + sin(theta0) B = 0
// characterizes the rotation.
struct RotatedHermitianForm {
  double theta0 = 0.0;
  ComplexMatrix h;
};

inline std::optional<RotatedHermitianForm> detect_rotated_hermitian(
    const ComplexMatrix& a, const ComplexMatrix& b,
    const TolerancePolicy& tol) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 && nb == 0.0) return std::nullopt;  // zero matrix
  double theta0;
  if (na <= tol.eps_rank * nb) {
    theta0 = 0.0;  // A = 0: C = j B
  } else if (nb <= tol.eps_rank * na) {
    theta0 = kPi / 2.0;  // B = 0: C Hermitian
  } else {
    // Real linear dependence of (A, B) in Hermitian space, decided by the
    // SVD of the stacked real vectorizations (σ2 stays accurate where a
    // Gram determinant would lose half the digits to cancellation).
    const Eigen::Index m = a.size();
    Eigen::MatrixXd stacked(2 * m, 2);
    stacked.col(0) << Eigen::Map<const RealVector>(
        reinterpret_cast<const double*>(a.data()), 2 * m);
    stacked.col(1) << Eigen::Map<const RealVector>(
        reinterpret_cast<const double*>(b.data()), 2 * m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd2(stacked, Eigen::ComputeFullV);
    const RealVector sv = svd2.singularValues();
    if (sv(1) > tol.eps_rank * 1e3 * sv(0)) return std::nullopt;
    const Eigen::Vector2d dir = svd2.matrixV().col(1);  // null direction
    theta0 = std::atan2(dir(1), dir(0));
  }
  // theta0 is defined modulo pi; put it in (-pi/2, pi/2], ties toward +pi/2.
  theta0 -= kPi * std::ceil((theta0 - kPi / 2.0) / kPi);
  RotatedHermitianForm out;
  out.theta0 = theta0;
  out.h = std::cos(theta0) * b - std::sin(theta0) * a;
  return out;
}

// Inertia (positive, negative, zero counts) of a Hermitian matrix.
struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

inline Inertia inertia_of(const ComplexMatrix& h, const TolerancePolicy& tol) {
  const HermEigResult es = herm_eig(h, tol);
  const double thr = tol.eps_psd * std::max(1.0, h.norm());
  Inertia out;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double w = es.eigenvalues(i);
    if (w > thr) {
      ++out.positive;
    } else if (w < -thr) {
      ++out.negative;
    } else {
      ++out.zero;
    }
  }
  return out;
}

// lambda_min(cos(alpha) A + sin(alpha) B), the support margin of the
// rotated numerical range against the closed right half-plane.
inline double arc_margin(const ComplexMatrix& a, const ComplexMatrix& b,
                         double alpha) {
  return lambda_min(std::cos(alpha) * a + std::sin(alpha) * b);
}

struct ArcScan {
  AngleArc arc;
  bool antipodal_pair = false;  // feasible set was two antipodal points
};

// Locates {alpha : H(e^{-j alpha} C) >= 0} from a 720-point grid with
// bisection-refined endpoints.  Rotated-Hermitian inputs are dispatched
// analytically since their feasible set can be two isolated points the
// grid would miss.
inline ArcScan scan_accretivity_arc(const ComplexMatrix& a,
                                    const ComplexMatrix& b, double norm_c,
                                    const TolerancePolicy& tol) {
  ArcScan out;
  if (norm_c == 0.0) {
    out.arc = AngleArc::full_circle();
    return out;
  }
  const double thr = -tol.eps_psd * std::max(1.0, norm_c);

  if (auto rh = detect_rotated_hermitian(a, b, tol)) {
    // H(e^{-j alpha} C) = sin(alpha - theta0) H.
    const Inertia in = inertia_of(rh->h, tol);
    if (in.positive > 0 && in.negative > 0) {
      double t = rh->theta0;  // canonical representative in (-pi/2, pi/2]
      out.arc = AngleArc::interval(t, t);
      out.antipodal_pair = true;
      return out;
    }
    const double t = rh->theta0;
    // Semidefinite H: a half-circle of feasible rotations.
    double lo = (in.negative == 0) ? t : t - kPi;
    out.arc = AngleArc::interval(wrap_angle(lo), wrap_angle(lo) + kPi);
    return out;
  }

  constexpr int kGrid = 720;
  const double step = 2.0 * kPi / kGrid;
  std::vector<double> margin(kGrid);
  std::vector<bool> feasible(kGrid);
  bool any = false, all = true;
  for (int i = 0; i < kGrid; ++i) {
    const double alpha = -kPi + i * step;
    margin[i] = arc_margin(a, b, alpha);
    feasible[i] = margin[i] >= thr;
    any = any || feasible[i];
    all = all && feasible[i];
  }
  if (all) {
    // Should only happen for the zero matrix, handled above; treat as a
    // numerically zero input.
    out.arc = AngleArc::full_circle();
    return out;
  }

  auto grid_angle = [&](int i) { return -kPi + i * step; };
  auto refine_endpoint = [&](double alpha_feas, double alpha_inf) {
    for (int it = 0; it < 48; ++it) {
      const double mid = (alpha_feas + alpha_inf) / 2.0;
      if (arc_margin(a, b, mid) >= thr) {
        alpha_feas = mid;
      } else {
        alpha_inf = mid;
      }
    }
    return alpha_feas;
  };

  if (any) {
    // Maximal circular run of feasible grid points.  Rotate the scan so it
    // begins right after an infeasible point; runs then never straddle the
    // scan origin.
    int start = 0;
    while (feasible[(start + kGrid - 1) % kGrid]) ++start;
    int best_begin = 0, best_len = 0;
    for (int seen = 0; seen < kGrid;) {
      while (seen < kGrid && !feasible[(start + seen) % kGrid]) ++seen;
      if (seen >= kGrid) break;
      const int begin = seen;
      while (seen < kGrid && feasible[(start + seen) % kGrid]) ++seen;
      if (seen - begin > best_len) {
        best_len = seen - begin;
        best_begin = begin;
      }
    }
    double lo = grid_angle(start) + best_begin * step;
    double hi = lo + (best_len - 1) * step;
    lo = refine_endpoint(lo, lo - step);
    hi = refine_endpoint(hi, hi + step);
    const double lo_w = wrap_angle(lo);
    out.arc = AngleArc::interval(lo_w, lo_w + (hi - lo));
    return out;
  }

  // No feasible grid point: the arc may still be a touch point between
  // grid nodes.  Polish the local maxima of the margin.
  auto polish = [&](double center) {
    double lo = center - step, hi = center + step;
    for (int it = 0; it < 80; ++it) {
      const double m1 = lo + 0.381966 * (hi - lo);
      const double m2 = hi - 0.381966 * (hi - lo);
      if (arc_margin(a, b, m1) < arc_margin(a, b, m2)) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    return (lo + hi) / 2.0;
  };
  double best_alpha = 0.0, best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const int prev = (i + kGrid - 1) % kGrid;
    const int next = (i + 1) % kGrid;
    if (margin[i] >= margin[prev] && margin[i] >= margin[next]) {
      const double alpha = polish(grid_angle(i));
      const double val = arc_margin(a, b, alpha);
      if (val > best_val) {
        best_val = val;
        best_alpha = alpha;
      }
    }
  }
  if (best_val >= thr) {
    double t = wrap_angle(best_alpha);
    // A feasible antipode means the numerical range sits on a line through
    // the origin; report the canonical representative in (-pi/2, pi/2].
    const double anti = polish(best_alpha + kPi);
    if (arc_margin(a, b, anti) >= thr) {
      out.antipodal_pair = true;
      t -= kPi * std::ceil((t - kPi / 2.0) / kPi);
    }
    out.arc = AngleArc::interval(t, t);
    return out;
  }
  out.arc = AngleArc::empty();
  return out;
}

}  // namespace detail

/// Feasible rotation set {alpha : H(e^{-j alpha} C) is PSD}.  Empty when 0
/// lies in the interior of the numerical range, the full circle for the
/// zero matrix, otherwise one closed arc (a single point when the range
/// touches the supporting line, reported at the canonical representative
/// for rotated-Hermitian inputs whose feasible set is two antipodal points).
inline AngleArc accretivity_arc(const ComplexMatrix& c,
                                const TolerancePolicy& tol = {}) {
  auto [a, b] = hermitian_split(c);
  return detail::scan_accretivity_arc(a, b, c.norm(), tol).arc;
}

/// Classify C as Sectorial / QuasiSectorial / SemiSectorial /
/// NotSemiSectorial, detect the rotated-Hermitian degeneracy, and report
/// the numerical rank and feasible rotation arc.
inline SectorClass classify(const ComplexMatrix& c,
                            const TolerancePolicy& tol = {}) {
  auto [a, b] = hermitian_split(c);
  const double norm_c = c.norm();
  SectorClass out;
  out.rank = numerical_rank(c, tol);

  if (norm_c == 0.0 || out.rank == 0) {
    // The zero matrix is quasi-sectorial with zero phases.
    out.kind = SectorKind::QuasiSectorial;
    out.feasible_arc = AngleArc::full_circle();
    return out;
  }

  const detail::ArcScan scan =
      detail::scan_accretivity_arc(a, b, norm_c, tol);
  out.feasible_arc = scan.arc;
  out.rotated_hermitian =
      scan.antipodal_pair ||
      detail::detect_rotated_hermitian(a, b, tol).has_value();

  if (scan.arc.is_empty()) {
    out.kind = SectorKind::NotSemiSectorial;
    return out;
  }
  if (scan.antipodal_pair) {
    out.kind = SectorKind::SemiSectorial;
    return out;
  }

  const double mid = scan.arc.midpoint();
  const ComplexMatrix h_mid =
      std::cos(mid) * a + std::sin(mid) * b;
  const HermEigResult es = herm_eig(h_mid, tol);
  const double strict = tol.eps_psd * std::max(1.0, norm_c);
  if (es.eigenvalues.minCoeff() > strict) {
    out.kind = SectorKind::Sectorial;
    return out;
  }
  // Quasi-sectorial iff the kernel of the rotated Hermitian part is a
  // subspace of the kernel of C (equivalently there is eps > 0 with
  // H >= eps C*C, restricted to the range).
  bool kernel_ok = true;
  const double zero_thr = tol.eps_psd * std::max(1.0, h_mid.norm());
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    if (std::abs(es.eigenvalues(i)) <= zero_thr) {
      const ComplexVector k = es.eigenvectors.col(i);
      if ((c * k).norm() > tol.eps_rank * std::max(1.0, norm_c) * 1e3) {
        kernel_ok = false;
        break;
      }
    }
  }
  out.kind = kernel_ok ? SectorKind::QuasiSectorial : SectorKind::SemiSectorial;
  return out;
}

/// Field angle delta(C) in [0, 2 pi]: the angle subtended by the angular
/// numerical range (pi when the range has a line through 0 on its boundary,
/// 2 pi when 0 is interior).
inline double field_angle(const ComplexMatrix& c,
                          const TolerancePolicy& tol = {}) {
  require_square(c);
  require_finite(c);
  if (c.norm() == 0.0) throw DomainError("field angle of the zero matrix");
  const AngleArc arc = accretivity_arc(c, tol);
  if (arc.is_empty()) return 2.0 * kPi;  // 0 interior to W(C)
  return kPi - arc.length();
}

/// Phases of a sectorial or quasi-sectorial matrix: rotate by the arc
/// midpoint, compress onto the range, and read arctangents of the
/// generalized eigenvalues of the skew against the Hermitian part.
inline PhaseList phases_quasi(const ComplexMatrix& c,
                              const TolerancePolicy& tol = {}) {
  const SectorClass cls = classify(c, tol);
  if (cls.kind != SectorKind::Sectorial &&
      cls.kind != SectorKind::QuasiSectorial) {
    throw DomainError("matrix is not quasi-sectorial");
  }
  PhaseList out;
  if (cls.rank == 0) {
    out.canonicalize();
    return out;
  }
  const double alpha = cls.feasible_arc.midpoint();
  const SvdResult sv = svd(c, tol);
  const ComplexMatrix ur = sv.u.leftCols(cls.rank);
  const ComplexMatrix m =
      ur.adjoint() * (std::polar(1.0, -alpha) * c) * ur;
  const ComplexMatrix ap = hermitian_part(m);
  const ComplexMatrix bp = skew_part(m);
  const ComplexMatrix w = inv_sqrt_pd(ap, tol);
  const HermEigResult g = herm_eig(w * bp * w, tol);
  out.phases.resize(cls.rank);
  for (int i = 0; i < cls.rank; ++i) {
    out.phases[i] = alpha + std::atan(g.eigenvalues(i));
  }
  out.canonicalize();
  return out;
}

/// Phases of a rotated-Hermitian matrix C = e^{j theta0} j H: inertia of H
/// gives the multiplicities of theta0 +/- pi/2.
inline PhaseList phases_rotated_hermitian(const ComplexMatrix& c,
                                          const TolerancePolicy& tol = {}) {
  auto [a, b] = hermitian_split(c);
  if (c.norm() == 0.0) throw DomainError("matrix is not rotated Hermitian");
  auto rh = detail::detect_rotated_hermitian(a, b, tol);
  if (!rh) {
    // Fall back on the feasible-rotation scan: two antipodal touch points
    // pin theta0 even when the split parts fail the dependence test.
    const detail::ArcScan scan =
        detail::scan_accretivity_arc(a, b, c.norm(), tol);
    if (!scan.antipodal_pair) {
      throw DomainError("matrix is not rotated Hermitian");
    }
    detail::RotatedHermitianForm form;
    form.theta0 = scan.arc.lo;
    form.h = hermitian_part(Complex(0, -1) * std::polar(1.0, -scan.arc.lo) * c);
    rh = form;
  }
  const detail::Inertia in = detail::inertia_of(rh->h, tol);
  PhaseList out;
  out.phases.assign(static_cast<size_t>(in.positive), rh->theta0 + kPi / 2.0);
  out.phases.insert(out.phases.end(), static_cast<size_t>(in.negative),
                    rh->theta0 - kPi / 2.0);
  out.canonicalize();
  return out;
}

/// Best-effort phases of a generic semi-sectorial matrix: compress onto the
/// range (which preserves the phase list exactly), nudge into the sectorial
/// cone along e^{j gamma0}, and extrapolate the phase lists to eps -> 0.
/// The eps^(1/2) model matches the splitting rate of the defective pairs
/// converging to theta0 +/- pi/2.  Result is flagged approximate.
inline PhaseList phases_semi_best_effort(
    const ComplexMatrix& c, std::vector<double> eps_sequence = {},
    const TolerancePolicy& tol = {}) {
  if (eps_sequence.empty()) eps_sequence = {1e-2, 1e-3, 1e-4};
  if (eps_sequence.size() < 2) {
    throw std::invalid_argument("need at least two perturbation sizes");
  }
  for (size_t i = 1; i < eps_sequence.size(); ++i) {
    if (!(eps_sequence[i] < eps_sequence[i - 1]) || eps_sequence[i] <= 0.0) {
      throw std::invalid_argument("eps sequence must be positive decreasing");
    }
  }
  const SectorClass cls = classify(c, tol);
  if (cls.kind != SectorKind::SemiSectorial || cls.rotated_hermitian) {
    throw DomainError(
        "best-effort phases expect a generic semi-sectorial matrix");
  }
  const double gamma0 = cls.feasible_arc.midpoint();
  const SvdResult sv = svd(c, tol);
  const ComplexMatrix ur = sv.u.leftCols(cls.rank);
  const ComplexMatrix chat = ur.adjoint() * c * ur;
  const ComplexMatrix eye = ComplexMatrix::Identity(cls.rank, cls.rank);

  std::vector<PhaseList> lists;
  lists.reserve(eps_sequence.size());
  const double scale = std::max(chat.norm(), 1e-30);
  for (double eps : eps_sequence) {
    PhaseList pl =
        phases_quasi(chat + (eps * scale) * std::polar(1.0, gamma0) * eye, tol);
    pl.align_center_to(gamma0);
    if (static_cast<int>(pl.phases.size()) != cls.rank) {
      throw NumericError("perturbed compression lost rank");
    }
    lists.push_back(std::move(pl));
  }
  const PhaseList& p1 = lists[lists.size() - 2];
  const PhaseList& p2 = lists[lists.size() - 1];
  const double s1 = std::sqrt(eps_sequence[eps_sequence.size() - 2]);
  const double s2 = std::sqrt(eps_sequence[eps_sequence.size() - 1]);
  PhaseList out;
  out.phases.resize(p2.phases.size());
  double est = 0.0;
  for (size_t i = 0; i < p2.phases.size(); ++i) {
    out.phases[i] =
        (s1 * p2.phases[i] - s2 * p1.phases[i]) / (s1 - s2);
    est = std::max(est, std::abs(out.phases[i] - p2.phases[i]));
  }
  out.approximate = true;
  out.error_estimate = est;
  out.canonicalize();
  return out;
}

/// Cross-check route: phases are half the angles of the nonzero eigenvalues
/// of C (C*)^dagger, branch centered by the accretive rotation.
inline PhaseList phases_via_congruence_square(const ComplexMatrix& c,
                                              const TolerancePolicy& tol = {}) {
  const SectorClass cls = classify(c, tol);
  if (cls.kind != SectorKind::Sectorial &&
      cls.kind != SectorKind::QuasiSectorial) {
    throw DomainError("matrix is not quasi-sectorial");
  }
  PhaseList out;
  if (cls.rank == 0) {
    out.canonicalize();
    return out;
  }
  const double alpha = cls.feasible_arc.midpoint();
  const ComplexMatrix x = c * pinv(c.adjoint(), tol);
  ComplexVector lam = eigenvalues(x);
  // Nonzero eigenvalues of C (C*)^dagger are unimodular; keep the rank
  // largest in modulus and insist they are bounded away from zero.
  std::vector<Complex> vals(lam.data(), lam.data() + lam.size());
  std::sort(vals.begin(), vals.end(),
            [](Complex p, Complex q) { return std::abs(p) > std::abs(q); });
  vals.resize(static_cast<size_t>(cls.rank));
  const Complex twist = std::polar(1.0, -2.0 * alpha);
  for (Complex v : vals) {
    if (std::abs(v) < 0.5) {
      throw NumericError("congruence-square eigenvalue collapsed");
    }
    out.phases.push_back(alpha + std::arg(twist * v) / 2.0);
  }
  out.canonicalize();
  return out;
}

/// Route to the appropriate phase extractor by classification.
inline PhaseList phases_of(const ComplexMatrix& c,
                           const TolerancePolicy& tol = {},
                           bool allow_best_effort = true) {
  const SectorClass cls = classify(c, tol);
  switch (cls.kind) {
    case SectorKind::Sectorial:
    case SectorKind::QuasiSectorial:
      return phases_quasi(c, tol);
    case SectorKind::SemiSectorial:
      if (cls.rotated_hermitian) return phases_rotated_hermitian(c, tol);
      if (allow_best_effort) return phases_semi_best_effort(c, {}, tol);
      throw DomainError("phases of a generic semi-sectorial matrix require "
                        "the best-effort route");
    case SectorKind::NotSemiSectorial:
      break;
  }
  throw DomainError("matrix is not semi-sectorial");
}

/// Numerical range boundary data from the support function
/// h(theta) = lambda_max(H(e^{-j theta} C)) at K equally spaced angles.
struct NRBoundary {
  struct Sample {
    double theta = 0.0;
    double support = 0.0;
    Complex point;
  };
  std::vector<Sample> samples;
};

inline NRBoundary nr_boundary(const ComplexMatrix& c, int k,
                              const TolerancePolicy& tol = {}) {
  require_square(c);
  require_finite(c);
  if (k < 8) throw std::invalid_argument("need at least 8 samples");
  auto [a, b] = hermitian_split(c);
  NRBoundary out;
  out.samples.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double theta = 2.0 * kPi * i / k;
    const ComplexMatrix h = std::cos(theta) * a + std::sin(theta) * b;
    const HermEigResult es = herm_eig(h, tol);
    NRBoundary::Sample s;
    s.theta = theta;
    s.support = es.eigenvalues(0);
    const ComplexVector x = es.eigenvectors.col(0);
    s.point = (x.adjoint() * c * x)(0, 0);
    out.samples.push_back(s);
  }
  return out;
}

}  // namespace phasekit
