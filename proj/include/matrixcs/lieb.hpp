#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "matrixcs/linalg.hpp"
#include "matrixcs/outcome.hpp"

namespace matrixcs {

/// Unitarily invariant norms, evaluated as symmetric gauge functions of
/// singular values.
struct NormKind {
  enum class Tag { Operator, Trace, Frobenius, SchattenP, KyFan } tag;
  double p = 0.0; // Schatten exponent, >= 1
  int k = 0;      // Ky Fan order, >= 1

  static NormKind operator_norm() { return {Tag::Operator, 0.0, 0}; }
  static NormKind trace_norm() { return {Tag::Trace, 0.0, 0}; }
  static NormKind frobenius() { return {Tag::Frobenius, 0.0, 0}; }
  static NormKind schatten(double p);
  static NormKind ky_fan(int k);

  /// Gauge applied to a (not necessarily sorted) list of nonnegative values.
  double gauge(std::vector<double> values) const;
  double eval(const CMatrix &m, const Tolerance &tol = default_tol()) const;
  std::string name() const;
};

/// Scalar-valued matrix functionals from the canonical Lieb family.
struct LiebFunctional {
  enum class Tag { Determinant, Permanent, SpectralRadius, ElemSym, UINorm } tag;
  int k = 0; // ElemSym order
  NormKind norm{NormKind::Tag::Operator, 0.0, 0};

  static LiebFunctional determinant() { return {Tag::Determinant, 0, {}}; }
  static LiebFunctional permanent() { return {Tag::Permanent, 0, {}}; }
  static LiebFunctional spectral_radius() { return {Tag::SpectralRadius, 0, {}}; }
  static LiebFunctional elem_sym(int k);
  static LiebFunctional ui_norm(NormKind n) { return {Tag::UINorm, 0, n}; }

  /// Largest dimension this functional is evaluated at (permanent cap);
  /// 0 means unrestricted.
  int max_dim() const { return tag == Tag::Permanent ? 12 : 0; }
  std::string name() const;
};

constexpr int kPermanentMaxDim = 12;

Complex lieb_eval(const LiebFunctional &f, const CMatrix &m,
                  const Tolerance &tol = default_tol());

/// Permanent by Ryser's formula with Gray-code subset iteration. n <= 12.
Complex permanent(const CMatrix &m);

/// Elementary symmetric function of the eigenvalues, read off the
/// characteristic polynomial coefficients: e_k = (-1)^k * coeff(x^{n-k}).
Complex elem_sym_eigen(const CMatrix &m, int k);

double spectral_radius(const CMatrix &m);

/// A validated pair (g, h) of nonnegative functions with g(t) h(t) = t.
class FactorPair {
public:
  enum class Kind { Sqrt, Power, Custom };
  using Fn = std::function<double(double)>;

  static FactorPair sqrt_pair();
  /// g(t) = t^v, h(t) = t^{1-v}, v in [0, 1].
  static FactorPair power(double v);
  /// Caller-supplied pair, validated on the grid {0, 2^-8, ..., 2^8}
  /// (rescaled to [0, lambda_max] when applied to a wider spectrum).
  static FactorPair custom(Fn g, Fn h, const Tolerance &tol = default_tol());

  Kind kind() const { return kind_; }
  double power_exponent() const { return v_; }
  double g(double t) const { return g_(t); }
  double h(double t) const { return h_(t); }
  double g2(double t) const { double x = g_(t); return x * x; }
  double h2(double t) const { double x = h_(t); return x * x; }
  std::string name() const;

private:
  FactorPair(Kind kind, double v, Fn g, Fn h)
      : kind_(kind), v_(v), g_(std::move(g)), h_(std::move(h)) {}
  Kind kind_;
  double v_;
  Fn g_, h_;
};

/// (g^2(A), h^2(A)) for PSD A.
std::pair<CMatrix, CMatrix> apply_pair(const FactorPair &p, const CMatrix &a,
                                       const Tolerance &tol = default_tol());

/// Sampled verification of the two Lieb-class axioms plus the block form:
/// monotonicity on the PSD cone, |f(A^*B)|^2 <= f(A^*A) f(B^*B), and
/// |f(C)|^2 <= f(A) f(B) for PSD blocks [[A, C^*], [C, B]].
std::vector<CheckOutcome> check_lieb_axioms(const LiebFunctional &f, int trials,
                                            const std::vector<int> &dims,
                                            uint64_t seed,
                                            double tol_abs = 1e-12,
                                            double tol_rel = 1e-8);

} // namespace matrixcs
