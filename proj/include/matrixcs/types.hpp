#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace matrixcs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Error categories surfaced by the library. Every throwing path uses
/// Error with one of these codes so callers can dispatch without string
/// matching.
enum class ErrorCode {
  NotSquare,
  NotHermitian,
  NoConvergence,
  NotPsd,
  NotPositiveDefinite,
  ShapeMismatch,
  TooLargeForPermanent,
  RootFindingFailed,
  OffDiagonalMismatch,
  SimilarityMismatch,
  InvalidArgument,
  ParseError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

const char *error_code_name(ErrorCode code);

/// Single tolerance policy threaded through all modules.
/// Comparisons accept |x - y| <= abs + rel * max(1, scale).
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-9;

  double slack(double scale) const {
    return abs + rel * std::max(1.0, scale);
  }
};

inline const Tolerance &default_tol() {
  static const Tolerance tol{};
  return tol;
}

} // namespace matrixcs
