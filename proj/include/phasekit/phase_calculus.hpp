#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "phasekit/sectorial.hpp"

namespace phasekit {

/// Phase-bounded cone C[alpha, beta]: semi-sectorial matrices whose phase
/// interval fits in [alpha, beta] modulo 2*pi.  Requires 0 <= beta - alpha < 2*pi.
struct PhaseCone {
  double alpha;
  double beta;

  PhaseCone(double a, double b) : alpha(a), beta(b) {
    const double w = b - a;
    if (!(w >= 0.0) || !(w < 2.0 * kPi)) {
      throw std::invalid_argument(
          "phase cone requires 0 <= beta - alpha < 2*pi");
    }
  }

  double width() const { return beta - alpha; }

  /// Does [lo, hi] fit inside [alpha, beta] modulo 2*pi (with slack)?
  bool contains_interval(double lo, double hi, double slack = 0.0) const {
    for (int k = -2; k <= 2; ++k) {
      const double shift = 2.0 * kPi * k;
      if (lo + shift >= alpha - slack && hi + shift <= beta + slack) {
        return true;
      }
    }
    return false;
  }
};

/// x majorized by y: descending prefix sums of x never exceed those of y and
/// the totals agree within eps_phase * n.
inline bool majorization_check(std::vector<double> x, std::vector<double> y,
                               const TolerancePolicy& tol = {}) {
  if (x.size() != y.size()) {
    throw DomainError("majorization check requires equal lengths");
  }
  const size_t n = x.size();
  if (n == 0) return true;
  std::sort(x.begin(), x.end(), std::greater<double>());
  std::sort(y.begin(), y.end(), std::greater<double>());
  const double slack = tol.eps_phase * static_cast<double>(std::max<size_t>(n, 1));
  double sx = 0.0, sy = 0.0;
  for (size_t k = 0; k + 1 < n; ++k) {
    sx += x[k];
    sy += y[k];
    if (sx > sy + slack) return false;
  }
  sx += x[n - 1];
  sy += y[n - 1];
  return std::abs(sx - sy) <= slack;
}

/// Phases of the Moore-Penrose inverse: reverse and negate the phase list.
inline PhaseList pinv_phases(const ComplexMatrix& c,
                             const TolerancePolicy& tol = {}) {
  const SectorClass cls = classify(c, tol);
  PhaseList p;
  switch (cls.kind) {
    case SectorKind::Sectorial:
    case SectorKind::QuasiSectorial:
      p = phases_quasi(c, tol);
      break;
    case SectorKind::SemiSectorial:
      if (cls.rotated_hermitian) {
        p = phases_rotated_hermitian(c, tol);
        break;
      }
      [[fallthrough]];
    case SectorKind::NotSemiSectorial:
      throw DomainError("matrix does not have directly computable phases");
  }
  PhaseList out;
  out.phases.assign(p.phases.rbegin(), p.phases.rend());
  for (double& v : out.phases) v = -v;
  out.canonicalize();
  return out;
}

/// Membership of C in the cone; false (not an error) when C is not
/// semi-sectorial.  The zero matrix belongs to every cone.
inline bool cone_contains(const PhaseCone& cone, const ComplexMatrix& c,
                          const TolerancePolicy& tol = {}) {
  const SectorClass cls = classify(c, tol);
  if (cls.kind == SectorKind::NotSemiSectorial) return false;
  if (cls.rank == 0) return true;
  double lo, hi;
  if (cls.kind == SectorKind::SemiSectorial && !cls.rotated_hermitian) {
    // Generic semi-sectorial: the phase interval is exactly the half-circle
    // centered at the unique feasible rotation.
    const double g = cls.feasible_arc.midpoint();
    lo = g - kPi / 2.0;
    hi = g + kPi / 2.0;
  } else {
    const PhaseList p = (cls.kind == SectorKind::SemiSectorial)
                            ? phases_rotated_hermitian(c, tol)
                            : phases_quasi(c, tol);
    lo = p.phi_min();
    hi = p.phi_max();
  }
  return cone.contains_interval(lo, hi, tol.eps_phase);
}

/// Compression X* C X for X with full column rank.
inline ComplexMatrix compression(const ComplexMatrix& c,
                                 const ComplexMatrix& x,
                                 const TolerancePolicy& tol = {}) {
  require_square(c);
  require_finite(c);
  require_finite(x);
  if (x.rows() != c.rows()) {
    throw NumericError("compression dimensions do not match");
  }
  if (numerical_rank(x, tol) != x.cols()) {
    throw DomainError("compression matrix is rank deficient");
  }
  return x.adjoint() * c * x;
}

/// Interlacing of the compression phases:
/// phi_j(C) >= phi_j(X* C X) >= phi_{r - rt + j}(C) for j = 1..rt.
inline bool interlace_check(const ComplexMatrix& c, const ComplexMatrix& x,
                            const TolerancePolicy& tol = {}) {
  PhaseList pc;
  {
    const SectorClass cls = classify(c, tol);
    if (cls.rank == 0) throw DomainError("interlacing requires a nonzero matrix");
    if (cls.kind == SectorKind::Sectorial ||
        cls.kind == SectorKind::QuasiSectorial) {
      pc = phases_quasi(c, tol);
    } else if (cls.kind == SectorKind::SemiSectorial && cls.rotated_hermitian) {
      pc = phases_rotated_hermitian(c, tol);
    } else {
      throw DomainError("matrix does not have directly computable phases");
    }
  }
  const ComplexMatrix ct = compression(c, x, tol);
  if (numerical_rank(ct, tol) == 0) {
    throw DomainError("compression is numerically zero");
  }
  const SectorClass cls_t = classify(ct, tol);
  if (cls_t.kind == SectorKind::NotSemiSectorial) return false;
  PhaseList pt = phases_of(ct, tol);
  pt.align_center_to(pc.center);
  const int r = pc.rank;
  const int rt = pt.rank;
  const double slack =
      pt.approximate ? std::max(tol.eps_phase, 10.0 * pt.error_estimate)
                     : tol.eps_phase;
  for (int j = 0; j < rt; ++j) {
    if (pc.phases[j] < pt.phases[j] - slack) return false;
    if (pt.phases[j] < pc.phases[r - rt + j] - slack) return false;
  }
  return true;
}

/// Phases of the generalized Schur complement C/11 = C22 - C21 C11^+ C12,
/// after verifying the range conditions R(C12) in R(C11) and
/// R(C21*) in R(C11*).
inline PhaseList schur_phases(const ComplexMatrix& c, int k,
                              const TolerancePolicy& tol = {}) {
  require_square(c);
  require_finite(c);
  const int n = static_cast<int>(c.rows());
  if (k <= 0 || k >= n) throw std::invalid_argument("invalid partition size");
  const ComplexMatrix c11 = c.topLeftCorner(k, k);
  const ComplexMatrix c12 = c.topRightCorner(k, n - k);
  const ComplexMatrix c21 = c.bottomLeftCorner(n - k, k);
  const ComplexMatrix c22 = c.bottomRightCorner(n - k, n - k);

  const SvdResult sv11 = svd(c11, tol);
  const ComplexMatrix ur = sv11.u.leftCols(sv11.rank);
  const ComplexMatrix vr = sv11.v.leftCols(sv11.rank);
  const double n12 = c12.norm();
  const double n21 = c21.norm();
  if (n12 > 0.0) {
    const double resid = (c12 - ur * (ur.adjoint() * c12)).norm();
    if (resid > tol.eps_rank * n12 * 1e3) {
      throw DomainError("range condition R(C12) in R(C11) violated");
    }
  }
  if (n21 > 0.0) {
    const ComplexMatrix c21h = c21.adjoint();
    const double resid = (c21h - vr * (vr.adjoint() * c21h)).norm();
    if (resid > tol.eps_rank * n21 * 1e3) {
      throw DomainError("range condition R(C21*) in R(C11*) violated");
    }
  }
  const ComplexMatrix schur = c22 - c21 * pinv(c11, tol) * c12;
  return phases_of(schur, tol);
}

/// Outcome of the product majorization test for C = A B.
struct MajorizationReport {
  std::vector<double> eigen_angles;   // descending, branch near gamma(A)+gamma(B)
  std::vector<double> bound_phases;   // phi(U*AU) + phi(U*BU), descending
  ComplexMatrix isometry;             // the n x r isometry U
  bool holds = false;                 // prefix sums + equal totals
  bool corollary_bounds_hold = false; // phi_lo(A)+phi_lo(B) <= angles <= phi_hi(A)+phi_hi(B)
  bool eigen_count_consistent = false;
  int nonzero_eigen_count = 0;
  std::vector<double> eigen_prefix;
  std::vector<double> bound_prefix;
  bool approximate = false;
};

namespace detail {

inline std::vector<double> prefix_sums(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    s += v[i];
    out[i] = s;
  }
  return out;
}

// Angles of the r largest-modulus eigenvalues, branch shifted into
// (center - pi, center + pi], sorted descending.
inline std::vector<double> top_eigen_angles(const ComplexMatrix& c, int r,
                                            double center) {
  const ComplexVector lam = eigenvalues(c);
  std::vector<Complex> vals(lam.data(), lam.data() + lam.size());
  std::sort(vals.begin(), vals.end(),
            [](Complex p, Complex q) { return std::abs(p) > std::abs(q); });
  std::vector<double> angles;
  angles.reserve(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    const double raw = std::arg(vals[static_cast<size_t>(i)]);
    const double k = std::ceil((raw - center - kPi) / (2.0 * kPi));
    angles.push_back(raw - 2.0 * kPi * k);
  }
  std::sort(angles.begin(), angles.end(), std::greater<double>());
  return angles;
}

inline bool prefix_majorized(const std::vector<double>& x,
                             const std::vector<double>& y, double slack) {
  double sx = 0.0, sy = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    if (k + 1 < x.size() && sx > sy + slack) return false;
  }
  return x.empty() || std::abs(sx - sy) <= slack;
}

}  // namespace detail

/// Majorization between the nonzero eigenvalue angles of AB and the summed
/// phases of the compressions of A and B onto the proof's isometry:
/// A restricted to its range, then B restricted to the range of its own
/// compression.
inline MajorizationReport product_majorization(const ComplexMatrix& a,
                                               const ComplexMatrix& b,
                                               const TolerancePolicy& tol = {}) {
  const SectorClass cls_a = classify(a, tol);
  if (cls_a.kind != SectorKind::Sectorial &&
      cls_a.kind != SectorKind::QuasiSectorial) {
    throw DomainError("left factor must be quasi-sectorial");
  }
  const SectorClass cls_b = classify(b, tol);
  if (cls_b.kind == SectorKind::NotSemiSectorial) {
    throw DomainError("right factor must be semi-sectorial");
  }

  MajorizationReport rep;
  const ComplexMatrix c = a * b;
  const double scale_c2 = [&] {
    Eigen::JacobiSVD<ComplexMatrix> s(c);
    const double s1 = s.singularValues().size() ? s.singularValues()(0) : 0.0;
    return s1 * s1;
  }();
  const int rank_c2 = numerical_rank_scaled(c * c, scale_c2, tol);

  if (cls_a.rank == 0 || cls_b.rank == 0 || rank_c2 == 0) {
    rep.nonzero_eigen_count = 0;
    rep.eigen_count_consistent = (rank_c2 == 0);
    rep.holds = true;
    rep.corollary_bounds_hold = true;
    rep.isometry = ComplexMatrix::Zero(a.rows(), 0);
    return rep;
  }

  const PhaseList pa = phases_quasi(a, tol);
  const PhaseList pb = phases_of(b, tol);

  // Proof construction: U1 spans R(A); U2 spans the range of B compressed
  // onto it; U = U1 U2.
  const ComplexMatrix u1 = svd(a, tol).range_isometry();
  const ComplexMatrix a1 = u1.adjoint() * a * u1;
  const ComplexMatrix b1 = u1.adjoint() * b * u1;
  const SvdResult sv_b1 = svd(b1, tol);
  const ComplexMatrix u2 = sv_b1.range_isometry();
  const ComplexMatrix u = u1 * u2;
  rep.isometry = u;
  const int r = sv_b1.rank;
  rep.nonzero_eigen_count = r;
  rep.eigen_count_consistent = (r == rank_c2);

  PhaseList pa2 = phases_quasi(u.adjoint() * a * u, tol);
  PhaseList pb2 = phases_of(u.adjoint() * b * u, tol);
  pa2.align_center_to(pa.center);
  pb2.align_center_to(pb.center);
  rep.approximate = pa2.approximate || pb2.approximate;

  rep.bound_phases.resize(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    rep.bound_phases[static_cast<size_t>(i)] =
        pa2.phases[static_cast<size_t>(i)] + pb2.phases[static_cast<size_t>(i)];
  }
  rep.eigen_angles = detail::top_eigen_angles(c, r, pa.center + pb.center);

  double slack = tol.eps_phase * std::max(1, r);
  if (rep.approximate) {
    slack = std::max(slack, 10.0 * std::max(pa2.error_estimate,
                                            pb2.error_estimate) * r);
  }
  rep.holds = detail::prefix_majorized(rep.eigen_angles, rep.bound_phases, slack);
  rep.eigen_prefix = detail::prefix_sums(rep.eigen_angles);
  rep.bound_prefix = detail::prefix_sums(rep.bound_phases);

  const double lo_bound = pa.phi_min() + pb.phi_min();
  const double hi_bound = pa.phi_max() + pb.phi_max();
  rep.corollary_bounds_hold =
      rep.eigen_angles.front() <= hi_bound + slack &&
      rep.eigen_angles.back() >= lo_bound - slack;
  return rep;
}

/// Specialization A = I: the nonzero eigenvalue angles of a semi-sectorial C
/// are majorized by the phases of its compression onto the range, and the
/// nonzero eigenvalue count equals rank(C).
inline MajorizationReport self_majorization(const ComplexMatrix& c,
                                            const TolerancePolicy& tol = {}) {
  const SectorClass cls = classify(c, tol);
  if (cls.kind == SectorKind::NotSemiSectorial) {
    throw DomainError("matrix must be semi-sectorial");
  }
  MajorizationReport rep;
  const int r = cls.rank;
  rep.nonzero_eigen_count = r;
  if (r == 0) {
    rep.holds = true;
    rep.corollary_bounds_hold = true;
    rep.eigen_count_consistent = true;
    rep.isometry = ComplexMatrix::Zero(c.rows(), 0);
    return rep;
  }
  const ComplexMatrix u = svd(c, tol).range_isometry();
  rep.isometry = u;
  const ComplexMatrix chat = u.adjoint() * c * u;
  if (numerical_rank(chat, tol) != r) {
    throw NumericError("range compression of a semi-sectorial matrix "
                       "is unexpectedly singular");
  }
  PhaseList phat = phases_of(chat, tol);
  rep.approximate = phat.approximate;
  rep.bound_phases = phat.phases;
  rep.eigen_angles = detail::top_eigen_angles(c, r, phat.center);

  // Count check: eigenvalues below the rank cutoff must be exactly n - r.
  const ComplexVector lam = eigenvalues(c);
  std::vector<double> mods(static_cast<size_t>(lam.size()));
  for (Eigen::Index i = 0; i < lam.size(); ++i) mods[static_cast<size_t>(i)] = std::abs(lam(i));
  std::sort(mods.begin(), mods.end(), std::greater<double>());
  const double cutoff = std::sqrt(tol.eps_rank) * std::max(1.0, mods.front());
  int count = 0;
  for (double m : mods) {
    if (m > cutoff) ++count;
  }
  rep.eigen_count_consistent = (count == r);

  double slack = tol.eps_phase * std::max(1, r);
  if (rep.approximate) {
    slack = std::max(slack, 10.0 * phat.error_estimate * r);
  }
  rep.holds = detail::prefix_majorized(rep.eigen_angles, rep.bound_phases, slack);
  rep.eigen_prefix = detail::prefix_sums(rep.eigen_angles);
  rep.bound_prefix = detail::prefix_sums(rep.bound_phases);
  rep.corollary_bounds_hold =
      rep.eigen_angles.front() <= phat.phi_max() + slack &&
      rep.eigen_angles.back() >= phat.phi_min() - slack;
  return rep;
}

/// Matrix small phase theorem test: det(I + A B) != 0 for every B in the
/// cone iff [alpha, beta] fits strictly inside
/// (-pi - phi_min(A), pi - phi_max(A)) modulo 2*pi.
inline bool spt_check(const ComplexMatrix& a, const PhaseCone& cone,
                      const TolerancePolicy& tol = {}) {
  const PhaseList pa = phases_quasi(a, tol);
  if (pa.empty()) return true;  // A = 0 never makes I + AB singular
  for (int k = -2; k <= 2; ++k) {
    const double shift = 2.0 * kPi * k;
    if (cone.alpha + shift > -kPi - pa.phi_min() + tol.eps_phase &&
        cone.beta + shift < kPi - pa.phi_max() - tol.eps_phase) {
      return true;
    }
  }
  return false;
}

namespace detail {

// A = T* blkdiag(0, diag(e^{j phi})) T with d_phases descending.
// t_inv is returned so witnesses can be mapped back cheaply.
struct QuasiDecomposition {
  ComplexMatrix t;
  ComplexMatrix t_inv;
  std::vector<double> d_phases;
  int rank = 0;
};

inline QuasiDecomposition quasi_decomposition(const ComplexMatrix& a,
                                              const TolerancePolicy& tol) {
  const SectorClass cls = classify(a, tol);
  if (cls.kind != SectorKind::Sectorial &&
      cls.kind != SectorKind::QuasiSectorial) {
    throw DomainError("matrix is not quasi-sectorial");
  }
  if (cls.rank == 0) {
    throw DomainError("zero matrix has no sectorial factor");
  }
  const int n = static_cast<int>(a.rows());
  const int r = cls.rank;
  const double alpha = cls.feasible_arc.midpoint();
  const SvdResult sv = svd(a, tol);
  ComplexMatrix ufull(n, n);
  ufull.leftCols(n - r) = sv.u.rightCols(n - r);  // kernel side first
  ufull.rightCols(r) = sv.u.leftCols(r);
  const ComplexMatrix ur = sv.u.leftCols(r);
  const ComplexMatrix m = ur.adjoint() * (std::polar(1.0, -alpha) * a) * ur;
  const ComplexMatrix ap = hermitian_part(m);
  const ComplexMatrix bp = skew_part(m);
  const HermEigResult ea = herm_eig(ap, tol);
  RealVector sqrt_w(r), inv_sqrt_w(r);
  for (int i = 0; i < r; ++i) {
    if (ea.eigenvalues(i) <= 0.0) {
      throw NumericError("rotated Hermitian part is not positive definite");
    }
    sqrt_w(i) = std::sqrt(ea.eigenvalues(i));
    inv_sqrt_w(i) = 1.0 / sqrt_w(i);
  }
  const ComplexMatrix a_half =
      ea.eigenvectors * sqrt_w.asDiagonal() * ea.eigenvectors.adjoint();
  const ComplexMatrix a_inv_half =
      ea.eigenvectors * inv_sqrt_w.asDiagonal() * ea.eigenvectors.adjoint();
  const HermEigResult eg = herm_eig(a_inv_half * bp * a_inv_half, tol);
  RealVector sec_half(r);
  QuasiDecomposition out;
  out.rank = r;
  out.d_phases.resize(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    const double psi = std::atan(eg.eigenvalues(i));
    out.d_phases[static_cast<size_t>(i)] = alpha + psi;  // descending
    sec_half(i) = 1.0 / std::sqrt(std::cos(psi));
  }
  const ComplexMatrix rfac =
      sec_half.asDiagonal() * eg.eigenvectors.adjoint() * a_half;
  ComplexMatrix block = ComplexMatrix::Identity(n, n);
  block.bottomRightCorner(r, r) = rfac;
  out.t = block * ufull.adjoint();
  ComplexMatrix block_inv = ComplexMatrix::Identity(n, n);
  block_inv.bottomRightCorner(r, r) =
      rfac.partialPivLu().solve(ComplexMatrix::Identity(r, r));
  out.t_inv = ufull * block_inv;
  return out;
}

}  // namespace detail

/// Constructs B in the cone with I + AB singular, for a cone that fails
/// spt_check.  Rank-one construction: B = c e^{j theta} T^{-1}
/// blkdiag(0, q q*) T^{-*} so that AB has the eigenvalue -1 exactly, with
/// q a mixture of the extreme sectorial directions of A.
inline ComplexMatrix spt_witness(const ComplexMatrix& a, const PhaseCone& cone,
                                 const TolerancePolicy& tol = {}) {
  if (spt_check(a, cone, tol)) {
    throw DomainError("cone does not violate the small phase condition");
  }
  const detail::QuasiDecomposition qd = detail::quasi_decomposition(a, tol);
  const int n = static_cast<int>(a.rows());
  const int r = qd.rank;
  const double phi_hi = qd.d_phases.front();
  const double phi_lo = qd.d_phases.back();

  // Find theta_B in [alpha, beta] and psi in [phi_lo, phi_hi] with
  // theta_B + psi = pi (mod 2*pi); nonempty exactly when the check fails.
  std::optional<std::pair<double, double>> pick;
  for (int k = -2; k <= 2 && !pick; ++k) {
    const double target = kPi + 2.0 * kPi * k;
    const double lo = std::max(cone.alpha, target - phi_hi);
    const double hi = std::min(cone.beta, target - phi_lo);
    if (lo <= hi + tol.eps_phase) {
      const double theta = std::clamp((lo + hi) / 2.0, cone.alpha, cone.beta);
      pick = {theta, target - theta};
    }
  }
  if (!pick) {
    throw NumericError("witness search failed to locate a kill angle");
  }
  const double psi_target = pick->second;

  // Sweep q(s) = cos(s) e_max + sin(s) e_min; the angle of q* D q moves
  // monotonically from phi_hi to phi_lo.
  auto mix_value = [&](double s) {
    return std::cos(s) * std::cos(s) * std::polar(1.0, phi_hi) +
           std::sin(s) * std::sin(s) * std::polar(1.0, phi_lo);
  };
  double lo_s = 0.0, hi_s = kPi / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = (lo_s + hi_s) / 2.0;
    if (std::arg(mix_value(mid)) >= psi_target) {
      lo_s = mid;
    } else {
      hi_s = mid;
    }
  }
  const double s = (lo_s + hi_s) / 2.0;
  const Complex val = mix_value(s);

  ComplexVector q = ComplexVector::Zero(r);
  if (r == 1) {
    q(0) = 1.0;  // phi_hi == phi_lo; any unit q works
  } else {
    q(0) = std::cos(s);
    q(r - 1) = std::sin(s);
  }
  double theta_b = kPi - std::arg(val);
  while (theta_b > cone.beta + tol.eps_phase) theta_b -= 2.0 * kPi;
  while (theta_b < cone.alpha - tol.eps_phase) theta_b += 2.0 * kPi;
  theta_b = std::clamp(theta_b, cone.alpha, cone.beta);

  ComplexMatrix core = ComplexMatrix::Zero(n, n);
  core.bottomRightCorner(r, r) = q * q.adjoint();
  const ComplexMatrix b = (std::polar(1.0, theta_b) / std::abs(val)) *
                          (qd.t_inv * core * qd.t_inv.adjoint());
  const ComplexMatrix iab =
      ComplexMatrix::Identity(n, n) + a * b;
  const double smin = sigma_min(iab);
  if (smin > 1e-6 * (1.0 + iab.norm())) {
    throw NumericError("witness failed to make I + AB singular; sigma_min = " +
                       std::to_string(smin));
  }
  return b;
}

}  // namespace phasekit
