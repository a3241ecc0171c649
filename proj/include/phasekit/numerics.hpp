#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "phasekit/tolerance.hpp"

namespace phasekit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline bool is_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

inline void require_finite(const ComplexMatrix& m) {
  if (!m.allFinite()) throw NumericError("matrix has non-finite entries");
}

inline void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw NumericError("matrix is not square");
}

/// Hermitian part (C + C*)/2.
inline ComplexMatrix hermitian_part(const ComplexMatrix& c) {
  return (c + c.adjoint()) / 2.0;
}

/// Skew contribution B with C = A + jB; B = (C - C*)/(2j) is Hermitian.
inline ComplexMatrix skew_part(const ComplexMatrix& c) {
  return (c - c.adjoint()) / Complex(0.0, 2.0);
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending
/// with eigenvector column i paired to eigenvalue i.
struct HermEigResult {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

inline HermEigResult herm_eig(const ComplexMatrix& h,
                              const TolerancePolicy& tol = {}) {
  require_square(h);
  require_finite(h);
  const double scale = h.norm();
  const double asym = (h - h.adjoint()).norm();
  if (asym > tol.eps_psd * std::max(1.0, scale)) {
    throw NumericError("matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) {
    throw NumericError("Hermitian eigendecomposition failed to converge");
  }
  // Eigen returns ascending order; flip to descending.
  HermEigResult out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

/// Smallest eigenvalue of a Hermitian matrix (no eigenvectors).
inline double lambda_min(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double lambda_max(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

/// PSD test with the borderline declared PSD: lambda_min >= -eps_psd * max(1, ||H||_F).
inline bool is_psd(const ComplexMatrix& h, const TolerancePolicy& tol = {}) {
  return lambda_min(hermitian_part(h)) >=
         -tol.eps_psd * std::max(1.0, h.norm());
}

/// Full singular value decomposition C = U diag(sigma) V*.
/// rank counts singular values above eps_rank * sigma_1.
struct SvdResult {
  ComplexMatrix u;
  RealVector singular_values;
  ComplexMatrix v;
  int rank = 0;

  ComplexMatrix range_isometry() const { return u.leftCols(rank); }
};

inline SvdResult svd(const ComplexMatrix& c, const TolerancePolicy& tol = {}) {
  require_finite(c);
  Eigen::JacobiSVD<ComplexMatrix> solver(
      c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.u = solver.matrixU();
  out.singular_values = solver.singularValues();
  out.v = solver.matrixV();
  const double s1 =
      out.singular_values.size() > 0 ? out.singular_values(0) : 0.0;
  out.rank = 0;
  for (Eigen::Index i = 0; i < out.singular_values.size(); ++i) {
    if (out.singular_values(i) > tol.eps_rank * s1) ++out.rank;
  }
  if (s1 == 0.0) out.rank = 0;
  return out;
}

/// Numerical rank by SVD cutoff; the one rank test used everywhere.
inline int numerical_rank(const ComplexMatrix& c,
                          const TolerancePolicy& tol = {}) {
  return svd(c, tol).rank;
}

/// Rank with the cutoff anchored to an external scale instead of sigma_1.
/// Needed for rank(C^2)-style questions where C^2 may be pure rounding noise.
inline int numerical_rank_scaled(const ComplexMatrix& c, double scale,
                                 const TolerancePolicy& tol = {}) {
  Eigen::JacobiSVD<ComplexMatrix> solver(c);
  const RealVector s = solver.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol.eps_rank * std::max(scale, 0.0)) ++rank;
  }
  if (scale <= 0.0) return numerical_rank(c, tol);
  return rank;
}

/// Moore-Penrose pseudoinverse through the SVD rank cutoff.
inline ComplexMatrix pinv(const ComplexMatrix& c,
                          const TolerancePolicy& tol = {}) {
  const SvdResult d = svd(c, tol);
  ComplexMatrix out = ComplexMatrix::Zero(c.cols(), c.rows());
  for (int i = 0; i < d.rank; ++i) {
    out += d.v.col(i) * d.u.col(i).adjoint() / d.singular_values(i);
  }
  return out;
}

/// H^{-1/2} for Hermitian positive definite H; throws if any eigenvalue
/// is at or below the PSD floor.
inline ComplexMatrix inv_sqrt_pd(const ComplexMatrix& h,
                                 const TolerancePolicy& tol = {}) {
  const HermEigResult es = herm_eig(h, tol);
  const double floor = tol.eps_psd * std::max(1.0, h.norm());
  RealVector w(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (es.eigenvalues(i) <= floor * 1e-3) {
      throw NumericError("matrix is not positive definite");
    }
    w(i) = 1.0 / std::sqrt(es.eigenvalues(i));
  }
  return es.eigenvectors * w.asDiagonal() * es.eigenvectors.adjoint();
}

/// Eigenvalues of a general complex square matrix.
inline ComplexVector eigenvalues(const ComplexMatrix& c) {
  require_square(c);
  require_finite(c);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(c, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericError("eigenvalue computation failed to converge");
  }
  return es.eigenvalues();
}

/// Smallest singular value.
inline double sigma_min(const ComplexMatrix& c) {
  Eigen::JacobiSVD<ComplexMatrix> solver(c);
  const RealVector s = solver.singularValues();
  return s.size() > 0 ? s(s.size() - 1) : 0.0;
}

}  // namespace phasekit
