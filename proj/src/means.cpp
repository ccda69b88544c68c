#include "matrixcs/means.hpp"

#include <cmath>

namespace matrixcs {

namespace {

struct PdSpectral {
  CMatrix sqrt;
  CMatrix inv_sqrt;
};

PdSpectral pd_roots(const CMatrix &m, const char *who, const Tolerance &tol) {
  require_pd(m, who, tol);
  EigDecomp eig = herm_eig(m, tol);
  return {apply_fn(eig, [](double t) { return std::sqrt(t); }),
          apply_fn(eig, [](double t) { return 1.0 / std::sqrt(t); })};
}

CMatrix hermitize_checked(const CMatrix &r, const char *who, const Tolerance &tol) {
  const CMatrix h = (r + r.adjoint()) / 2.0;
  if ((r - h).norm() > tol.slack(h.norm()) * 1e3)
    throw Error(ErrorCode::NoConvergence,
                std::string(who) + ": result far from Hermitian");
  return h;
}

} // namespace

void require_pd(const CMatrix &m, const char *who, const Tolerance &tol) {
  if (!is_square(m))
    throw Error(ErrorCode::NotSquare, std::string(who) + ": matrix is not square");
  const EigDecomp eig = herm_eig(m, tol);
  const double lam_max = eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0;
  const double lam_min = eig.eigenvalues.size()
                             ? eig.eigenvalues(eig.eigenvalues.size() - 1)
                             : 0.0;
  if (lam_min <= tol.slack(lam_max) )
    throw Error(ErrorCode::NotPositiveDefinite,
                std::string(who) + ": matrix is not positive definite");
}

CMatrix geom_mean(const CMatrix &a, const CMatrix &b, const Tolerance &tol) {
  WeightedMeanQuery q{a, b, 0.5};
  return weighted_geom_mean(q, tol);
}

CMatrix weighted_geom_mean(const WeightedMeanQuery &q, const Tolerance &tol) {
  if (q.a.rows() != q.b.rows() || q.a.cols() != q.b.cols())
    throw Error(ErrorCode::ShapeMismatch, "weighted_geom_mean: shape mismatch");
  if (q.weight < 0.0 || q.weight > 1.0)
    throw Error(ErrorCode::InvalidArgument,
                "weighted_geom_mean: weight must be in [0, 1]");
  const PdSpectral a = pd_roots(q.a, "weighted_geom_mean", tol);
  require_pd(q.b, "weighted_geom_mean", tol);
  const CMatrix middle = a.inv_sqrt * q.b * a.inv_sqrt;
  const double t = q.weight;
  const CMatrix powered =
      apply_fn(middle, [t](double x) { return std::pow(x, t); }, tol);
  return hermitize_checked(a.sqrt * powered * a.sqrt, "weighted_geom_mean", tol);
}

CMatrix gm_block(const CMatrix &a, const CMatrix &b, const Tolerance &tol) {
  const CMatrix mean = geom_mean(a, b, tol);
  const Eigen::Index n = a.rows();
  CMatrix block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.topRightCorner(n, n) = mean;
  block.bottomLeftCorner(n, n) = mean;
  block.bottomRightCorner(n, n) = b;
  return block;
}

} // namespace matrixcs
