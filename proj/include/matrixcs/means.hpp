#pragma once

#include "matrixcs/linalg.hpp"

namespace matrixcs {

struct WeightedMeanQuery {
  CMatrix a;
  CMatrix b;
  double weight = 0.5; // in [0, 1]
};

/// A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2} for positive
/// definite A, B. Result is Hermitized; no silent regularization of
/// singular inputs.
CMatrix geom_mean(const CMatrix &a, const CMatrix &b,
                  const Tolerance &tol = default_tol());

/// A #_t B with the middle exponent t; t = 0 gives A, t = 1 gives B.
CMatrix weighted_geom_mean(const WeightedMeanQuery &q,
                           const Tolerance &tol = default_tol());

/// The positive block [[A, A#B], [A#B, B]].
CMatrix gm_block(const CMatrix &a, const CMatrix &b,
                 const Tolerance &tol = default_tol());

/// Positive-definite certification used by the mean: lambda_min > tol_pd * lambda_max.
void require_pd(const CMatrix &m, const char *who,
                const Tolerance &tol = default_tol());

} // namespace matrixcs
