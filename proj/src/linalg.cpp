#include "matrixcs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace matrixcs {

const char *error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::NotSquare: return "NotSquare";
  case ErrorCode::NotHermitian: return "NotHermitian";
  case ErrorCode::NoConvergence: return "NoConvergence";
  case ErrorCode::NotPsd: return "NotPsd";
  case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
  case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  case ErrorCode::TooLargeForPermanent: return "TooLargeForPermanent";
  case ErrorCode::RootFindingFailed: return "RootFindingFailed";
  case ErrorCode::OffDiagonalMismatch: return "OffDiagonalMismatch";
  case ErrorCode::SimilarityMismatch: return "SimilarityMismatch";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

double herm_defect(const CMatrix &m) {
  return (m - m.adjoint()).norm();
}

CMatrix SvdDecomp::reconstruct() const {
  CMatrix sigma = CMatrix::Zero(left.cols(), right.cols());
  for (Eigen::Index i = 0; i < singular_values.size(); ++i)
    sigma(i, i) = singular_values(i);
  return left * sigma * right.adjoint();
}

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffdiagFactor = 1e-13;

double offdiag_norm(const CMatrix &h) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

void sort_descending(RVector &vals, CMatrix &vecs) {
  const Eigen::Index n = vals.size();
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });
  RVector sv(n);
  CMatrix svec(vecs.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sv(k) = vals(idx[static_cast<size_t>(k)]);
    svec.col(k) = vecs.col(idx[static_cast<size_t>(k)]);
  }
  vals = sv;
  vecs = svec;
}

} // namespace

EigDecomp herm_eig(const CMatrix &h, const Tolerance &tol) {
  if (!is_square(h))
    throw Error(ErrorCode::NotSquare, "herm_eig: matrix is not square");
  const double scale = h.norm();
  if (herm_defect(h) > tol.rel * (1.0 + scale))
    throw Error(ErrorCode::NotHermitian, "herm_eig: Hermitian defect exceeds tolerance");

  const Eigen::Index n = h.rows();
  // Work on the Hermitian part so roundoff in the input cannot leak
  // imaginary diagonal entries into the iteration.
  CMatrix a = (h + h.adjoint()) / 2.0;
  CMatrix v = CMatrix::Identity(n, n);

  const double target = kOffdiagFactor * std::max(scale, 1e-300);
  int sweep = 0;
  while (offdiag_norm(a) > target) {
    if (++sweep > kMaxSweeps)
      throw Error(ErrorCode::NoConvergence, "herm_eig: Jacobi sweep cap reached");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex z = a(p, q);
        const double m = std::abs(z);
        if (m <= 1e-300) continue;
        const Complex phase = z / m;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // 2x2 rotation zeroing a(p,q): tan(2*theta) = 2m / (app - aqq).
        const double tau = (app - aqq) / (2.0 * m);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex s = t * c * std::conj(phase); // column rotation entry

        // Columns: [col_p, col_q] <- [col_p, col_q] * [[c, -conj(s)],[s, c]]
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip + s * aiq;
          a(i, q) = -std::conj(s) * aip + c * aiq;
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip + s * viq;
          v(i, q) = -std::conj(s) * vip + c * viq;
        }
        // Rows: conjugate-transpose action.
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj + std::conj(s) * aqj;
          a(q, j) = -s * apj + c * aqj;
        }
        a(p, q) = Complex(0, 0);
        a(q, p) = Complex(0, 0);
        a(p, p) = Complex(a(p, p).real(), 0);
        a(q, q) = Complex(a(q, q).real(), 0);
      }
    }
  }

  RVector eigs(n);
  for (Eigen::Index i = 0; i < n; ++i) eigs(i) = a(i, i).real();
  sort_descending(eigs, v);
  return EigDecomp{std::move(eigs), std::move(v)};
}

SvdDecomp svd(const CMatrix &t, const Tolerance &tol) {
  const Eigen::Index r = t.rows(), c = t.cols();
  const Eigen::Index k = std::min(r, c);

  EigDecomp gram = herm_eig(CMatrix(t.adjoint() * t), tol);
  RVector sigma(k);
  for (Eigen::Index i = 0; i < k; ++i)
    sigma(i) = std::sqrt(std::max(0.0, gram.eigenvalues(i)));

  CMatrix right = gram.basis; // c x c, full
  const double sigma_max = (k > 0) ? sigma(0) : 0.0;
  const double rank_cut = 1e-12 * std::max(sigma_max, 1e-300);
  // Eigenvalues of T^*T below the Jacobi noise floor are true zeros whose
  // eigenvector images T v_i are pure roundoff; keep them out of the range.
  const double gram_floor = 32.0 * std::numeric_limits<double>::epsilon() *
                            std::max(sigma_max * sigma_max, 1e-300);

  // Left columns from T v_i / sigma_i where sigma_i is above the rank
  // cutoff, re-orthonormalized as they are built, then modified
  // Gram-Schmidt completion against the standard basis.
  CMatrix left = CMatrix::Zero(r, r);
  Eigen::Index filled = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (sigma(i) > rank_cut && gram.eigenvalues(i) > gram_floor) {
      CVector col = t * right.col(i) / sigma(i);
      for (Eigen::Index j = 0; j < filled; ++j)
        col -= left.col(j) * (left.col(j).dot(col));
      const double nrm = col.norm();
      if (nrm > 0.5) {
        left.col(filled++) = col / nrm;
        continue;
      }
    }
    sigma(i) = 0.0;
  }
  const Eigen::Index rank = filled;
  for (Eigen::Index e = 0; e < r && filled < r; ++e) {
    CVector cand = CVector::Zero(r);
    cand(e) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < filled; ++j)
        cand -= left.col(j) * (left.col(j).dot(cand));
    const double nrm = cand.norm();
    if (nrm > 1e-4)
      left.col(filled++) = cand / nrm;
  }
  if (filled < r)
    throw Error(ErrorCode::NoConvergence, "svd: null-space completion failed");

  // Zero singular directions were dropped; re-pack so that sigma stays
  // aligned with the first `rank` left columns and right columns.
  if (rank < k) {
    CMatrix right_packed = right;
    RVector sigma_packed = RVector::Zero(k);
    Eigen::Index pos = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (sigma(i) > 0.0) {
        sigma_packed(pos) = sigma(i);
        right_packed.col(pos) = right.col(i);
        ++pos;
      }
    Eigen::Index tail = pos;
    for (Eigen::Index i = 0; i < c; ++i) {
      const bool kept = (i < k) && (sigma(i) > 0.0);
      if (!kept && tail < c) right_packed.col(tail++) = right.col(i);
    }
    right = right_packed;
    sigma = sigma_packed;
  }

  return SvdDecomp{std::move(left), std::move(sigma), std::move(right)};
}

RVector clamp_psd_eigs(const RVector &eigs, const Tolerance &tol) {
  const double lam_max = eigs.size() ? eigs.cwiseAbs().maxCoeff() : 0.0;
  const double cut = tol.slack(lam_max);
  RVector out = eigs;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < 0.0) {
      if (out(i) < -cut)
        throw Error(ErrorCode::NotPsd, "apply_fn: negative eigenvalue beyond tolerance");
      out(i) = 0.0;
    }
  }
  return out;
}

CMatrix apply_fn(const EigDecomp &eig, const std::function<double(double)> &phi) {
  RVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i)
    mapped(i) = phi(std::max(0.0, eig.eigenvalues(i)));
  CMatrix res = eig.basis * mapped.asDiagonal() * eig.basis.adjoint();
  return (res + res.adjoint()) / 2.0;
}

CMatrix apply_fn(const CMatrix &a, const std::function<double(double)> &phi,
                 const Tolerance &tol) {
  EigDecomp eig = herm_eig(a, tol);
  eig.eigenvalues = clamp_psd_eigs(eig.eigenvalues, tol);
  return apply_fn(eig, phi);
}

PolarParts polar_parts(const CMatrix &t, const Tolerance &tol) {
  if (!is_square(t))
    throw Error(ErrorCode::NotSquare, "polar_parts: matrix is not square");
  const CMatrix gram_r = t.adjoint() * t;
  const CMatrix gram_l = t * t.adjoint();
  const auto sqrt_fn = [](double x) { return std::sqrt(x); };
  PolarParts parts;
  parts.abs_t = apply_fn(gram_r, sqrt_fn, tol);
  parts.abs_tstar = apply_fn(gram_l, sqrt_fn, tol);
  parts.re_t = (t + t.adjoint()) / 2.0;
  parts.im_t = (t - t.adjoint()) / Complex(0, 2);
  return parts;
}

PsdWitness is_psd(const CMatrix &h, double tol_scale, const Tolerance &tol) {
  EigDecomp eig = herm_eig(h, tol);
  const Eigen::Index n = eig.eigenvalues.size();
  PsdWitness w;
  w.lambda_min = (n > 0) ? eig.eigenvalues(n - 1) : 0.0;
  w.eigvec_min = (n > 0) ? CVector(eig.basis.col(n - 1)) : CVector();
  const double lam_abs_max = (n > 0) ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  w.psd = w.lambda_min >= -tol_scale * std::max(1.0, lam_abs_max);
  return w;
}

PsdWitness is_psd(const CMatrix &h, const Tolerance &tol) {
  return is_psd(h, tol.abs + tol.rel, tol);
}

bool loewner_leq(const CMatrix &a, const CMatrix &b, const Tolerance &tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch, "loewner_leq: shape mismatch");
  const double scale = std::max(a.norm(), b.norm());
  if (herm_defect(a) > tol.rel * (1.0 + scale) ||
      herm_defect(b) > tol.rel * (1.0 + scale))
    throw Error(ErrorCode::NotHermitian, "loewner_leq: inputs are not Hermitian");
  return is_psd(CMatrix(b - a), tol).psd;
}

} // namespace matrixcs
