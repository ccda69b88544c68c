#pragma once

#include <vector>

#include "matrixcs/types.hpp"

namespace matrixcs {

/// Monic characteristic polynomial coefficients of a square matrix,
/// p(x) = x^n + coeffs[n-1] x^{n-1} + ... + coeffs[0], by the
/// Faddeev-LeVerrier trace recursion.
std::vector<Complex> charpoly_coeffs(const CMatrix &a);

/// All roots of a monic polynomial given by charpoly-style coefficients
/// (constant term first, leading 1 implicit). Simultaneous Aberth-Ehrlich
/// iteration; exact zero roots are stripped up front.
std::vector<Complex> poly_roots(const std::vector<Complex> &coeffs);

/// Eigenvalues of a general square matrix via charpoly_coeffs + poly_roots.
std::vector<Complex> charpoly_eigenvalues(const CMatrix &a);

} // namespace matrixcs
