#pragma once

#include "matrixcs/lieb.hpp"
#include "matrixcs/linalg.hpp"

namespace matrixcs {

/// [[A, C^*], [C, B]] with A n x n, B m x m, C m x n.
struct Block2x2 {
  CMatrix a;
  CMatrix c;
  CMatrix b;
  CMatrix assembled;

  Eigen::Index top_dim() const { return a.rows(); }
  Eigen::Index bottom_dim() const { return b.rows(); }
};

/// A PSD block split into two unitarily pinched halves:
/// source = u * diag(top, O) * u^* + v * diag(O, bottom) * v^*.
struct PinchDecomp {
  CMatrix u;
  CMatrix v;
  CMatrix top;
  CMatrix bottom;

  CMatrix reconstruct() const;
};

Block2x2 make_block(const CMatrix &a, const CMatrix &c, const CMatrix &b);

/// Extract the four blocks of an assembled (n+m) x (n+m) matrix.
Block2x2 split_block(const CMatrix &assembled, Eigen::Index n);

/// [[f^2(|T|), T^*], [T, g^2(|T^*|)]]; PSD for any square T and any
/// factor pair.
Block2x2 lemma03_block(const CMatrix &t, const FactorPair &p,
                       const Tolerance &tol = default_tol());

/// Constructive pinch decomposition of a PSD block via the square root
/// R = M^{1/2}: with X_i = P_i R, the full SVD X_i = W S Z^* yields the
/// conjugating unitary Z W^*.
PinchDecomp pinch_decompose(const Block2x2 &m, const Tolerance &tol = default_tol());

/// Pinch of the lemma03 block after a Hadamard-type rotation, so the two
/// pinched halves carry (f^2(|T|) + g^2(|T^*|))/2 +- Re T. Verifies the
/// recovered halves against those targets by eigenvalue multiset.
PinchDecomp remark13_decompose(const CMatrix &t, const FactorPair &p,
                               const Tolerance &tol = default_tol());

/// [[A1 # A2, C^*], [C, B1 # B2]] for two PSD blocks sharing C.
Block2x2 gm_block_merge(const Block2x2 &b1, const Block2x2 &b2,
                        const Tolerance &tol = default_tol());

} // namespace matrixcs
