#include "matrixcs/lieb.hpp"

#include <algorithm>
#include <cmath>

#include "matrixcs/charpoly.hpp"
#include "matrixcs/ensembles.hpp"

namespace matrixcs {

NormKind NormKind::schatten(double p) {
  if (p < 1.0)
    throw Error(ErrorCode::InvalidArgument, "NormKind::schatten: p must be >= 1");
  return {Tag::SchattenP, p, 0};
}

NormKind NormKind::ky_fan(int k) {
  if (k < 1)
    throw Error(ErrorCode::InvalidArgument, "NormKind::ky_fan: k must be >= 1");
  return {Tag::KyFan, 0.0, k};
}

double NormKind::gauge(std::vector<double> values) const {
  std::sort(values.begin(), values.end(), std::greater<double>());
  switch (tag) {
  case Tag::Operator:
    return values.empty() ? 0.0 : values.front();
  case Tag::Trace: {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  case Tag::Frobenius: {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
  case Tag::SchattenP: {
    double s = 0.0;
    for (double v : values) s += std::pow(v, p);
    return std::pow(s, 1.0 / p);
  }
  case Tag::KyFan: {
    double s = 0.0;
    const size_t top = std::min<size_t>(static_cast<size_t>(k), values.size());
    for (size_t i = 0; i < top; ++i) s += values[i];
    return s;
  }
  }
  throw Error(ErrorCode::InvalidArgument, "NormKind::gauge: unknown tag");
}

double NormKind::eval(const CMatrix &m, const Tolerance &tol) const {
  const SvdDecomp dec = svd(m, tol);
  std::vector<double> sv(dec.singular_values.data(),
                         dec.singular_values.data() + dec.singular_values.size());
  return gauge(std::move(sv));
}

std::string NormKind::name() const {
  switch (tag) {
  case Tag::Operator: return "operator";
  case Tag::Trace: return "trace";
  case Tag::Frobenius: return "frobenius";
  case Tag::SchattenP: return "schatten" + std::to_string(static_cast<int>(p));
  case Tag::KyFan: return "kyfan" + std::to_string(k);
  }
  return "?";
}

LiebFunctional LiebFunctional::elem_sym(int k) {
  if (k < 1)
    throw Error(ErrorCode::InvalidArgument, "LiebFunctional::elem_sym: k must be >= 1");
  return {Tag::ElemSym, k, {}};
}

std::string LiebFunctional::name() const {
  switch (tag) {
  case Tag::Determinant: return "det";
  case Tag::Permanent: return "per";
  case Tag::SpectralRadius: return "rho";
  case Tag::ElemSym: return "e" + std::to_string(k);
  case Tag::UINorm: return norm.name();
  }
  return "?";
}

Complex permanent(const CMatrix &m) {
  if (!is_square(m))
    throw Error(ErrorCode::NotSquare, "permanent: matrix is not square");
  const int n = static_cast<int>(m.rows());
  if (n > kPermanentMaxDim)
    throw Error(ErrorCode::TooLargeForPermanent, "permanent: n > 12");
  if (n == 0) return Complex(1, 0);

  // Ryser: per(A) = (-1)^n sum_{S != 0} (-1)^{|S|} prod_i sum_{j in S} a_ij.
  // Gray-code walk keeps the row sums updated with one column per step.
  CVector row_sums = CVector::Zero(n);
  Complex total(0, 0);
  uint32_t gray_prev = 0;
  const uint32_t count = 1u << n;
  for (uint32_t s = 1; s < count; ++s) {
    const uint32_t gray = s ^ (s >> 1);
    const uint32_t changed = gray ^ gray_prev;
    int j = 0;
    while (!((changed >> j) & 1u)) ++j;
    if (gray & changed)
      row_sums += m.col(j);
    else
      row_sums -= m.col(j);
    gray_prev = gray;

    Complex prod(1, 0);
    for (int i = 0; i < n; ++i) prod *= row_sums(i);
    const int bits = __builtin_popcount(gray);
    if (bits & 1)
      total -= prod;
    else
      total += prod;
  }
  if (n & 1) total = -total;
  return total;
}

Complex elem_sym_eigen(const CMatrix &m, int k) {
  const int n = static_cast<int>(m.rows());
  if (k < 1 || k > n)
    throw Error(ErrorCode::InvalidArgument, "elem_sym_eigen: k out of range");
  const auto coeffs = charpoly_coeffs(m);
  const Complex c = coeffs[static_cast<size_t>(n - k)];
  return (k % 2 == 0) ? c : -c;
}

double spectral_radius(const CMatrix &m) {
  double rho = 0.0;
  for (const Complex &z : charpoly_eigenvalues(m)) rho = std::max(rho, std::abs(z));
  return rho;
}

Complex lieb_eval(const LiebFunctional &f, const CMatrix &m, const Tolerance &tol) {
  if (!is_square(m))
    throw Error(ErrorCode::NotSquare, "lieb_eval: matrix is not square");
  switch (f.tag) {
  case LiebFunctional::Tag::Determinant:
    return m.partialPivLu().determinant();
  case LiebFunctional::Tag::Permanent:
    return permanent(m);
  case LiebFunctional::Tag::SpectralRadius:
    return Complex(spectral_radius(m), 0);
  case LiebFunctional::Tag::ElemSym:
    return elem_sym_eigen(m, f.k);
  case LiebFunctional::Tag::UINorm:
    return Complex(f.norm.eval(m, tol), 0);
  }
  throw Error(ErrorCode::InvalidArgument, "lieb_eval: unknown functional");
}

FactorPair FactorPair::sqrt_pair() {
  const auto s = [](double t) { return std::sqrt(t); };
  return FactorPair(Kind::Sqrt, 0.5, s, s);
}

FactorPair FactorPair::power(double v) {
  if (v < 0.0 || v > 1.0)
    throw Error(ErrorCode::InvalidArgument, "FactorPair::power: v must be in [0, 1]");
  return FactorPair(Kind::Power, v,
                    [v](double t) { return std::pow(t, v); },
                    [v](double t) { return std::pow(t, 1.0 - v); });
}

namespace {

void validate_pair_on_grid(const FactorPair::Fn &g, const FactorPair::Fn &h,
                           double t_max, const Tolerance &tol) {
  std::vector<double> grid{0.0};
  for (int k = -8; k <= 8; ++k) grid.push_back(std::ldexp(1.0, k));
  const double scale = (t_max > 256.0) ? t_max / 256.0 : 1.0;
  for (double t0 : grid) {
    const double t = t0 * scale;
    const double gv = g(t), hv = h(t);
    if (gv < -tol.slack(1.0) || hv < -tol.slack(1.0))
      throw Error(ErrorCode::InvalidArgument, "FactorPair: negative factor value");
    if (std::abs(gv * hv - t) > tol.slack(t))
      throw Error(ErrorCode::InvalidArgument, "FactorPair: g(t)h(t) != t on grid");
  }
}

} // namespace

FactorPair FactorPair::custom(Fn g, Fn h, const Tolerance &tol) {
  validate_pair_on_grid(g, h, 256.0, tol);
  return FactorPair(Kind::Custom, -1.0, std::move(g), std::move(h));
}

std::string FactorPair::name() const {
  switch (kind_) {
  case Kind::Sqrt: return "sqrt";
  case Kind::Power: {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "power%.2f", v_);
    return buf;
  }
  case Kind::Custom: return "custom";
  }
  return "?";
}

std::pair<CMatrix, CMatrix> apply_pair(const FactorPair &p, const CMatrix &a,
                                       const Tolerance &tol) {
  EigDecomp eig = herm_eig(a, tol);
  eig.eigenvalues = clamp_psd_eigs(eig.eigenvalues, tol);
  if (p.kind() == FactorPair::Kind::Custom) {
    const double lam_max = eig.eigenvalues.size() ? eig.eigenvalues(0) : 0.0;
    validate_pair_on_grid([&p](double t) { return p.g(t); },
                          [&p](double t) { return p.h(t); }, lam_max, tol);
  }
  return {apply_fn(eig, [&p](double t) { return p.g2(t); }),
          apply_fn(eig, [&p](double t) { return p.h2(t); })};
}

std::vector<CheckOutcome> check_lieb_axioms(const LiebFunctional &f, int trials,
                                            const std::vector<int> &dims,
                                            uint64_t seed, double tol_abs,
                                            double tol_rel) {
  if (trials < 1)
    throw Error(ErrorCode::InvalidArgument, "check_lieb_axioms: trials must be >= 1");
  std::vector<CheckOutcome> out;
  const std::string label = "lieb_axioms:" + f.name();
  for (int dim : dims) {
    if (f.max_dim() > 0 && dim > f.max_dim()) continue;
    for (int t = 0; t < trials; ++t) {
      RngStream rng = RngStream::for_trial(seed, label, dim, static_cast<uint64_t>(t));
      const uint64_t trial_seed = rng.state();

      const auto emit = [&](const char *id, double lhs, double rhs) {
        CheckOutcome o;
        o.check_id = id;
        o.functional = f.name();
        o.trial = static_cast<uint64_t>(t);
        o.dim = dim;
        o.lhs = lhs;
        o.rhs = rhs;
        o.margin = rhs - lhs;
        o.pass = o.margin >= -pass_slack(rhs, tol_abs, tol_rel);
        o.seed = trial_seed;
        out.push_back(std::move(o));
      };

      // (i) monotone on the PSD cone.
      const CMatrix a_psd = draw_psd(rng, dim);
      const CMatrix b_psd = a_psd + draw_psd(rng, dim);
      emit("lieb_axiom_monotone", lieb_eval(f, a_psd).real(),
           lieb_eval(f, b_psd).real());

      // (ii) |f(A^*B)|^2 <= f(A^*A) f(B^*B).
      const CMatrix a = draw_ginibre(rng, dim);
      const CMatrix b = draw_ginibre(rng, dim);
      const double lhs_cs = std::norm(lieb_eval(f, CMatrix(a.adjoint() * b)));
      const double rhs_cs = lieb_eval(f, CMatrix(a.adjoint() * a)).real() *
                            lieb_eval(f, CMatrix(b.adjoint() * b)).real();
      emit("lieb_axiom_cs", lhs_cs, rhs_cs);

      // Block form: |f(C)|^2 <= f(A) f(B) for a random PSD 2x2 block.
      const CMatrix w = draw_psd(rng, 2 * dim);
      const CMatrix blk_a = w.topLeftCorner(dim, dim);
      const CMatrix blk_b = w.bottomRightCorner(dim, dim);
      const CMatrix blk_c = w.bottomLeftCorner(dim, dim);
      emit("lieb_axiom_block", std::norm(lieb_eval(f, blk_c)),
           lieb_eval(f, blk_a).real() * lieb_eval(f, blk_b).real());
    }
  }
  return out;
}

} // namespace matrixcs
