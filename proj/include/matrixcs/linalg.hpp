#pragma once

#include <functional>

#include "matrixcs/types.hpp"

namespace matrixcs {

/// Spectral decomposition of a Hermitian matrix: H = basis * diag(eigenvalues) * basis^*.
/// Eigenvalues are sorted in descending order; basis columns are the matching
/// orthonormal eigenvectors.
struct EigDecomp {
  RVector eigenvalues;
  CMatrix basis;

  CMatrix reconstruct() const {
    return basis * eigenvalues.asDiagonal() * basis.adjoint();
  }
};

/// Full singular value decomposition T = left * diag(singular_values) * right^*.
/// left is rows x rows, right is cols x cols, singular values descending.
struct SvdDecomp {
  CMatrix left;
  RVector singular_values;
  CMatrix right;

  CMatrix reconstruct() const;
};

/// The polar/Cartesian quartet of a square matrix T.
struct PolarParts {
  CMatrix abs_t;     // |T| = (T^*T)^{1/2}
  CMatrix abs_tstar; // |T^*| = (TT^*)^{1/2}
  CMatrix re_t;      // (T + T^*)/2
  CMatrix im_t;      // (T - T^*)/(2i)
};

/// Result of a PSD test together with the extremal eigenpair that decides it.
struct PsdWitness {
  bool psd = false;
  double lambda_min = 0.0;
  CVector eigvec_min;
};

inline bool is_square(const CMatrix &m) { return m.rows() == m.cols(); }

double herm_defect(const CMatrix &m);

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
/// Requires ||H - H^*||_F <= tol.rel * (1 + ||H||_F). Sweeps until the
/// off-diagonal Frobenius mass drops below 1e-13 * ||H||_F (cap: 100 sweeps).
EigDecomp herm_eig(const CMatrix &h, const Tolerance &tol = default_tol());

/// Full SVD built on herm_eig of T^*T; left columns for tiny singular values
/// are completed by modified Gram-Schmidt.
SvdDecomp svd(const CMatrix &t, const Tolerance &tol = default_tol());

/// Functional calculus on a PSD matrix: phi(A) = U diag(phi(lambda_i)) U^*.
/// Eigenvalues in [-tol_psd, 0) are clamped to 0 before applying phi.
CMatrix apply_fn(const CMatrix &a, const std::function<double(double)> &phi,
                 const Tolerance &tol = default_tol());

/// Same, reusing an existing decomposition (saves the Jacobi sweep when
/// several functions of one matrix are needed).
CMatrix apply_fn(const EigDecomp &eig, const std::function<double(double)> &phi);

/// Clamp small negative eigenvalues of a PSD-certified decomposition to zero.
RVector clamp_psd_eigs(const RVector &eigs, const Tolerance &tol);

PolarParts polar_parts(const CMatrix &t, const Tolerance &tol = default_tol());

/// Loewner positivity test: lambda_min(H) >= -tol_scale * max(1, lambda_max(|H|)).
PsdWitness is_psd(const CMatrix &h, double tol_scale,
                  const Tolerance &tol = default_tol());
PsdWitness is_psd(const CMatrix &h, const Tolerance &tol = default_tol());

/// A <= B in the Loewner order, i.e. B - A is PSD.
bool loewner_leq(const CMatrix &a, const CMatrix &b,
                 const Tolerance &tol = default_tol());

} // namespace matrixcs
