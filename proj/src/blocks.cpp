#include "matrixcs/blocks.hpp"

#include <algorithm>
#include <cmath>

#include "matrixcs/means.hpp"

namespace matrixcs {

CMatrix PinchDecomp::reconstruct() const {
  const Eigen::Index n = top.rows();
  const Eigen::Index m = bottom.rows();
  CMatrix first = CMatrix::Zero(n + m, n + m);
  first.topLeftCorner(n, n) = top;
  CMatrix second = CMatrix::Zero(n + m, n + m);
  second.bottomRightCorner(m, m) = bottom;
  return u * first * u.adjoint() + v * second * v.adjoint();
}

Block2x2 make_block(const CMatrix &a, const CMatrix &c, const CMatrix &b) {
  if (!is_square(a) || !is_square(b))
    throw Error(ErrorCode::ShapeMismatch, "make_block: diagonal blocks must be square");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  if (c.rows() != m || c.cols() != n)
    throw Error(ErrorCode::ShapeMismatch, "make_block: C must be m x n");
  Block2x2 blk;
  blk.a = a;
  blk.c = c;
  blk.b = b;
  blk.assembled = CMatrix(n + m, n + m);
  blk.assembled.topLeftCorner(n, n) = a;
  blk.assembled.topRightCorner(n, m) = c.adjoint();
  blk.assembled.bottomLeftCorner(m, n) = c;
  blk.assembled.bottomRightCorner(m, m) = b;
  return blk;
}

Block2x2 split_block(const CMatrix &assembled, Eigen::Index n) {
  if (!is_square(assembled) || n < 0 || n > assembled.rows())
    throw Error(ErrorCode::ShapeMismatch, "split_block: bad split index");
  const Eigen::Index m = assembled.rows() - n;
  Block2x2 blk;
  blk.a = assembled.topLeftCorner(n, n);
  blk.b = assembled.bottomRightCorner(m, m);
  blk.c = assembled.bottomLeftCorner(m, n);
  blk.assembled = assembled;
  return blk;
}

Block2x2 lemma03_block(const CMatrix &t, const FactorPair &p, const Tolerance &tol) {
  if (!is_square(t))
    throw Error(ErrorCode::NotSquare, "lemma03_block: matrix is not square");
  const PolarParts parts = polar_parts(t, tol);
  const CMatrix top = apply_fn(parts.abs_t, [&p](double x) { return p.g2(x); }, tol);
  const CMatrix bottom =
      apply_fn(parts.abs_tstar, [&p](double x) { return p.h2(x); }, tol);
  Block2x2 blk = make_block(top, t, bottom);
  if (!is_psd(blk.assembled, tol).psd)
    throw Error(ErrorCode::NotPsd, "lemma03_block: positivity certificate failed");
  return blk;
}

namespace {

PinchDecomp pinch_of_psd(const Block2x2 &m, const Tolerance &tol) {
  const Eigen::Index n = m.top_dim();
  const Eigen::Index mm = m.bottom_dim();
  const Eigen::Index total = n + mm;

  const CMatrix root =
      apply_fn(m.assembled, [](double x) { return std::sqrt(x); }, tol);

  // X1 = P1 * R: top n rows of R, zero-padded. Full SVD X1 = W S Z^*
  // gives X1^* X1 = (Z W^*) (X1 X1^*) (W Z^*) with X1 X1^* = diag(A, O).
  CMatrix x1 = CMatrix::Zero(total, total);
  x1.topRows(n) = root.topRows(n);
  CMatrix x2 = CMatrix::Zero(total, total);
  x2.bottomRows(mm) = root.bottomRows(mm);

  const SvdDecomp s1 = svd(x1, tol);
  const SvdDecomp s2 = svd(x2, tol);

  PinchDecomp dec;
  dec.u = s1.right * s1.left.adjoint();
  dec.v = s2.right * s2.left.adjoint();
  dec.top = m.a;
  dec.bottom = m.b;
  return dec;
}

} // namespace

PinchDecomp pinch_decompose(const Block2x2 &m, const Tolerance &tol) {
  if (!is_psd(m.assembled, tol).psd)
    throw Error(ErrorCode::NotPsd, "pinch_decompose: block is not PSD");
  return pinch_of_psd(m, tol);
}

PinchDecomp remark13_decompose(const CMatrix &t, const FactorPair &p,
                               const Tolerance &tol) {
  const Eigen::Index n = t.rows();
  const Block2x2 source = lemma03_block(t, p, tol);

  // Hadamard-type rotation moving the off-diagonal data onto the diagonal:
  // the rotated block has diagonal halves (f^2(|T|) + g^2(|T^*|))/2 +- Re T.
  CMatrix had(2 * n, 2 * n);
  const CMatrix id = CMatrix::Identity(n, n);
  had.topLeftCorner(n, n) = id;
  had.topRightCorner(n, n) = id;
  had.bottomLeftCorner(n, n) = id;
  had.bottomRightCorner(n, n) = -id;
  had /= std::sqrt(2.0);

  const CMatrix rotated = had * source.assembled * had;
  PinchDecomp dec = pinch_decompose(split_block(rotated, n), tol);
  dec.u = had * dec.u;
  dec.v = had * dec.v;

  // Cross-check the recovered halves against independently assembled
  // targets, by eigenvalue multiset.
  const CMatrix re_t = (t + t.adjoint()) / 2.0;
  const CMatrix mid = (source.a + source.b) / 2.0;
  const CMatrix target_top = mid + re_t;
  const CMatrix target_bottom = mid - re_t;
  const double scale = std::max(1.0, source.assembled.norm());
  const auto eig_gap = [&](const CMatrix &x, const CMatrix &y) {
    const RVector ex = herm_eig(x, tol).eigenvalues;
    const RVector ey = herm_eig(y, tol).eigenvalues;
    return (ex - ey).cwiseAbs().maxCoeff();
  };
  if (eig_gap(dec.top, target_top) > tol.slack(scale) * 10 ||
      eig_gap(dec.bottom, target_bottom) > tol.slack(scale) * 10)
    throw Error(ErrorCode::SimilarityMismatch,
                "remark13_decompose: pinched halves do not match targets");
  return dec;
}

Block2x2 gm_block_merge(const Block2x2 &b1, const Block2x2 &b2, const Tolerance &tol) {
  if (b1.top_dim() != b2.top_dim() || b1.bottom_dim() != b2.bottom_dim())
    throw Error(ErrorCode::ShapeMismatch, "gm_block_merge: shape mismatch");
  const double scale = std::max(b1.c.norm(), b2.c.norm());
  if ((b1.c - b2.c).norm() > tol.slack(scale))
    throw Error(ErrorCode::OffDiagonalMismatch,
                "gm_block_merge: off-diagonal blocks differ");
  const CMatrix a = geom_mean(b1.a, b2.a, tol);
  const CMatrix b = geom_mean(b1.b, b2.b, tol);
  Block2x2 merged = make_block(a, b1.c, b);
  if (!is_psd(merged.assembled, tol).psd)
    throw Error(ErrorCode::NotPsd, "gm_block_merge: merged block is not PSD");
  return merged;
}

} // namespace matrixcs
