#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace phasekit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (matrix/graph files, complex literals).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-finite data, solver breakdown, residuals out of
/// tolerance where the algorithm guarantees they should not be.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Precondition violation on the mathematical domain of an operation
/// (e.g. asking for the phases of a matrix that is not semi-sectorial).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Single tolerance policy consulted by every module.
///
/// eps_rank  — relative singular-value cutoff for all rank decisions.
/// eps_psd   — relative eigenvalue floor for positive-semidefinite tests;
///             borderline matrices are declared PSD.
/// eps_phase — absolute angle tolerance in radians.
struct TolerancePolicy {
  double eps_rank = 1e-9;
  double eps_psd = 1e-9;
  double eps_phase = 1e-8;

  void validate() const {
    auto ok = [](double v) { return v > 0.0 && v < 1e-3; };
    if (!ok(eps_rank) || !ok(eps_psd) || !ok(eps_phase)) {
      throw std::invalid_argument(
          "tolerances must be strictly positive and smaller than 1e-3");
    }
  }

  /// Reads PHASEKIT_TOL_EPS_RANK / _EPS_PSD / _EPS_PHASE overrides.
  static TolerancePolicy from_env() {
    TolerancePolicy tol;
    auto read = [](const char* name, double& out) {
      if (const char* s = std::getenv(name)) {
        out = std::stod(std::string(s));
      }
    };
    read("PHASEKIT_TOL_EPS_RANK", tol.eps_rank);
    read("PHASEKIT_TOL_EPS_PSD", tol.eps_psd);
    read("PHASEKIT_TOL_EPS_PHASE", tol.eps_phase);
    tol.validate();
    return tol;
  }
};

}  // namespace phasekit
