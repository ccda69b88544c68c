#include "matrixcs/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "matrixcs/charpoly.hpp"

namespace matrixcs {

namespace {

// ---------------------------------------------------------------------------
// Lazy per-matrix functional evaluation: singular values and charpoly
// coefficients are computed at most once, whichever functionals ask.

class FEval {
public:
  explicit FEval(CMatrix m, const Tolerance &tol) : m_(std::move(m)), tol_(tol) {}

  const CMatrix &matrix() const { return m_; }

  Complex eval(const LiebFunctional &f) {
    switch (f.tag) {
    case LiebFunctional::Tag::Determinant:
      if (!det_) det_ = m_.partialPivLu().determinant();
      return *det_;
    case LiebFunctional::Tag::Permanent:
      if (!per_) per_ = permanent(m_);
      return *per_;
    case LiebFunctional::Tag::SpectralRadius: {
      double rho = 0.0;
      for (const Complex &z : roots()) rho = std::max(rho, std::abs(z));
      return Complex(rho, 0);
    }
    case LiebFunctional::Tag::ElemSym: {
      const auto &c = coeffs();
      const int n = static_cast<int>(m_.rows());
      if (f.k > n)
        throw Error(ErrorCode::InvalidArgument, "elem_sym: k > n");
      const Complex ck = c[static_cast<size_t>(n - f.k)];
      return (f.k % 2 == 0) ? ck : -ck;
    }
    case LiebFunctional::Tag::UINorm:
      return Complex(f.norm.gauge(sigma()), 0);
    }
    throw Error(ErrorCode::InvalidArgument, "FEval: unknown functional");
  }

  double real(const LiebFunctional &f) { return eval(f).real(); }
  double abs2(const LiebFunctional &f) { return std::norm(eval(f)); }

  const std::vector<double> &sigma() {
    if (!sigma_) {
      const SvdDecomp dec = svd(m_, tol_);
      sigma_.emplace(dec.singular_values.data(),
                     dec.singular_values.data() + dec.singular_values.size());
    }
    return *sigma_;
  }

private:
  const std::vector<Complex> &coeffs() {
    if (!coeffs_) coeffs_ = charpoly_coeffs(m_);
    return *coeffs_;
  }
  const std::vector<Complex> &roots() {
    if (!roots_) roots_ = poly_roots(coeffs());
    return *roots_;
  }

  CMatrix m_;
  Tolerance tol_;
  std::optional<std::vector<double>> sigma_;
  std::optional<std::vector<Complex>> coeffs_;
  std::optional<std::vector<Complex>> roots_;
  std::optional<Complex> det_;
  std::optional<Complex> per_;
};

// ---------------------------------------------------------------------------
// Trial plumbing.

struct CheckContext {
  uint64_t seed = 0;
  int dim = 0;
  uint64_t trial = 0;
  double tol_abs = 1e-12;
  double tol_rel = 1e-8;
  Tolerance tol;
  const std::vector<LiebFunctional> *functionals = nullptr;
  const std::vector<FactorPair> *pairs = nullptr;
  const std::vector<NormKind> *norms = nullptr;
};

using Emit = std::function<void(CheckOutcome &&)>;

CheckOutcome base_outcome(const CheckContext &ctx, const char *check_id,
                          uint64_t trial_seed) {
  CheckOutcome o;
  o.check_id = check_id;
  o.trial = ctx.trial;
  o.dim = ctx.dim;
  o.seed = trial_seed;
  return o;
}

/// Collects the sub-inequalities of one trial and keeps the binding one
/// (smallest margin relative to its own pass slack).
class PartTracker {
public:
  PartTracker(const CheckContext &ctx) : ctx_(ctx) {}

  void add(const char *part, double lhs, double rhs) {
    const double slack = pass_slack(rhs, ctx_.tol_abs, ctx_.tol_rel);
    const double margin = rhs - lhs;
    const bool ok = margin >= -slack;
    all_pass_ = all_pass_ && ok;
    const double key = margin + slack;
    if (!any_ || key < best_key_) {
      any_ = true;
      best_key_ = key;
      lhs_ = lhs;
      rhs_ = rhs;
      margin_ = margin;
      part_ = part;
    }
  }

  /// Loewner comparison lhs_m <= rhs_m recorded as lambda_min(rhs - lhs) >= 0.
  void add_loewner(const char *part, const CMatrix &lhs_m, const CMatrix &rhs_m) {
    const EigDecomp eig = herm_eig(CMatrix(rhs_m - lhs_m), ctx_.tol);
    const double lam_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
    add(part, -lam_min, 0.0);
  }

  void finish(CheckOutcome &&o, const Emit &emit) const {
    o.lhs = lhs_;
    o.rhs = rhs_;
    o.margin = margin_;
    o.pass = all_pass_;
    if (!o.note.empty()) o.note += "; ";
    o.note += "part=" + part_;
    emit(std::move(o));
  }

private:
  const CheckContext &ctx_;
  bool any_ = false;
  bool all_pass_ = true;
  double best_key_ = 0.0;
  double lhs_ = 0.0, rhs_ = 0.0, margin_ = 0.0;
  std::string part_ = "none";
};

/// Eigensystem of |T| obtained from the right Gram matrix T^*T; the basis
/// diagonalizes |T| and the eigenvalues are the singular values.
EigDecomp abs_eig(const CMatrix &t, bool star, const Tolerance &tol) {
  const CMatrix gram = star ? CMatrix(t * t.adjoint()) : CMatrix(t.adjoint() * t);
  EigDecomp eig = herm_eig(gram, tol);
  eig.eigenvalues = clamp_psd_eigs(eig.eigenvalues, tol);
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    eig.eigenvalues(i) = std::sqrt(eig.eigenvalues(i));
  return eig;
}

CMatrix apply_scalar(const EigDecomp &eig, const std::function<double(double)> &fn) {
  return apply_fn(eig, fn);
}

double op_norm_herm(const CMatrix &h, const Tolerance &tol) {
  const EigDecomp eig = herm_eig(h, tol);
  return eig.eigenvalues.size() ? eig.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

double lambda_min_herm(const CMatrix &h, const Tolerance &tol) {
  const EigDecomp eig = herm_eig(h, tol);
  return eig.eigenvalues(eig.eigenvalues.size() - 1);
}

CMatrix hermitize(const CMatrix &m) { return (m + m.adjoint()) / 2.0; }

/// Geometric mean that shifts PSD-but-singular operands by 1e-6 * I.
/// Returns the mean and whether a shift was applied; monotonicity of the
/// mean keeps the shifted bound valid.
CMatrix regularized_geom_mean(const CMatrix &a, const CMatrix &b,
                              const Tolerance &tol, bool &shifted) {
  const double shift = 1e-6;
  CMatrix aa = a, bb = b;
  shifted = false;
  const double la = lambda_min_herm(a, tol);
  const double lb = lambda_min_herm(b, tol);
  const double floor_a = tol.slack(op_norm_herm(a, tol));
  const double floor_b = tol.slack(op_norm_herm(b, tol));
  if (la <= floor_a + shift * 1e-3) {
    aa += shift * CMatrix::Identity(a.rows(), a.cols());
    shifted = true;
  }
  if (lb <= floor_b + shift * 1e-3) {
    bb += shift * CMatrix::Identity(b.rows(), b.cols());
    shifted = true;
  }
  return geom_mean(aa, bb, tol);
}

// ---------------------------------------------------------------------------
// Checks. Each draws its inputs from the per-trial stream, evaluates every
// configured axis combination, and emits one outcome per combination.

void check_cs_norm(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_cs_norm", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix a = draw_ginibre(rng, n);
  const CMatrix b = draw_ginibre(rng, n);
  const CMatrix x = draw_ginibre(rng, n);

  FEval mid(CMatrix(a.adjoint() * x * b), ctx.tol);
  FEval left(CMatrix(a * a.adjoint() * x), ctx.tol);
  FEval right(CMatrix(x * b * b.adjoint()), ctx.tol);
  for (const NormKind &nk : *ctx.norms) {
    PartTracker parts(ctx);
    const double l = nk.gauge(mid.sigma());
    parts.add("norm_cs", l * l, nk.gauge(left.sigma()) * nk.gauge(right.sigma()));
    CheckOutcome o = base_outcome(ctx, "check_cs_norm", ts);
    o.functional = nk.name();
    parts.finish(std::move(o), emit);
  }
}

void check_det_seiler(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_det_seiler", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix a = draw_ginibre(rng, n);
  const CMatrix b = draw_ginibre(rng, n);
  const CMatrix id = CMatrix::Identity(n, n);
  const PolarParts pa = polar_parts(a, ctx.tol);
  const PolarParts pb = polar_parts(b, ctx.tol);
  const double lhs = std::abs(CMatrix(id + a + b).partialPivLu().determinant());
  const double rhs = CMatrix(id + pa.abs_t).partialPivLu().determinant().real() *
                     CMatrix(id + pb.abs_t).partialPivLu().determinant().real();
  PartTracker parts(ctx);
  parts.add("det", lhs, rhs);
  parts.finish(base_outcome(ctx, "check_det_seiler", ts), emit);
}

void check_lieb_cs(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_lieb_cs", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const EigDecomp er = abs_eig(t, false, ctx.tol);
  const EigDecomp el = abs_eig(t, true, ctx.tol);
  FEval ft(t, ctx.tol);
  for (const FactorPair &p : *ctx.pairs) {
    FEval lhs_g(apply_scalar(er, [&p](double x) { return p.g2(x); }), ctx.tol);
    FEval rhs_h(apply_scalar(el, [&p](double x) { return p.h2(x); }), ctx.tol);
    for (const LiebFunctional &f : *ctx.functionals) {
      PartTracker parts(ctx);
      parts.add("mixed_cs", ft.abs2(f), lhs_g.real(f) * rhs_h.real(f));
      CheckOutcome o = base_outcome(ctx, "check_lieb_cs", ts);
      o.functional = f.name();
      o.pair = p.name();
      parts.finish(std::move(o), emit);
    }
  }
}

void check_lieb_weighted(const CheckContext &ctx, const Emit &emit) {
  RngStream rng =
      RngStream::for_trial(ctx.seed, "check_lieb_weighted", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const double w = rng.next_uniform();
  const CMatrix nrm = draw_normal(rng, ctx.dim);

  const EigDecomp er = abs_eig(t, false, ctx.tol);
  const EigDecomp el = abs_eig(t, true, ctx.tol);
  FEval ft(t, ctx.tol);
  FEval pow_l(apply_scalar(el, [w](double x) { return std::pow(x, 2.0 * (1.0 - w)); }),
              ctx.tol);
  FEval pow_r(apply_scalar(er, [w](double x) { return std::pow(x, 2.0 * w); }), ctx.tol);

  const EigDecomp en = abs_eig(nrm, false, ctx.tol);
  FEval fn_mat(nrm, ctx.tol);
  FEval abs_n(apply_scalar(en, [](double x) { return x; }), ctx.tol);

  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    parts.add("weighted", ft.abs2(f), pow_l.real(f) * pow_r.real(f));
    parts.add("normal_abs", std::abs(fn_mat.eval(f)), abs_n.real(f));
    CheckOutcome o = base_outcome(ctx, "check_lieb_weighted", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

struct SumCsData {
  CMatrix a, b;
  EigDecomp a_r, a_l, b_r, b_l;
};

SumCsData draw_sum_cs(RngStream &rng, const CheckContext &ctx) {
  SumCsData d;
  d.a = draw_ginibre(rng, ctx.dim);
  d.b = draw_ginibre(rng, ctx.dim);
  d.a_r = abs_eig(d.a, false, ctx.tol);
  d.a_l = abs_eig(d.a, true, ctx.tol);
  d.b_r = abs_eig(d.b, false, ctx.tol);
  d.b_l = abs_eig(d.b, true, ctx.tol);
  return d;
}

void check_sum_cs(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_sum_cs", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const SumCsData d = draw_sum_cs(rng, ctx);
  FEval sum(CMatrix(d.a + d.b), ctx.tol);
  for (const FactorPair &p : *ctx.pairs) {
    const auto g2 = [&p](double x) { return p.g2(x); };
    const auto h2 = [&p](double x) { return p.h2(x); };
    FEval lhs_m(CMatrix(apply_scalar(d.a_r, g2) + apply_scalar(d.b_r, g2)), ctx.tol);
    FEval rhs_m(CMatrix(apply_scalar(d.a_l, h2) + apply_scalar(d.b_l, h2)), ctx.tol);
    for (const LiebFunctional &f : *ctx.functionals) {
      PartTracker parts(ctx);
      parts.add("sum_cs", sum.abs2(f), lhs_m.real(f) * rhs_m.real(f));
      CheckOutcome o = base_outcome(ctx, "check_sum_cs", ts);
      o.functional = f.name();
      o.pair = p.name();
      parts.finish(std::move(o), emit);
    }
  }
}

void check_convex_cs(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_convex_cs", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const SumCsData d = draw_sum_cs(rng, ctx);
  const double v = rng.next_uniform();
  FEval mix(CMatrix((1.0 - v) * d.a + v * d.b), ctx.tol);
  for (const FactorPair &p : *ctx.pairs) {
    const auto g2 = [&p](double x) { return p.g2(x); };
    const auto h2 = [&p](double x) { return p.h2(x); };
    FEval lhs_m(CMatrix((1.0 - v) * apply_scalar(d.a_r, g2) +
                        v * apply_scalar(d.b_r, g2)),
                ctx.tol);
    FEval rhs_m(CMatrix((1.0 - v) * apply_scalar(d.a_l, h2) +
                        v * apply_scalar(d.b_l, h2)),
                ctx.tol);
    for (const LiebFunctional &f : *ctx.functionals) {
      PartTracker parts(ctx);
      parts.add("convex_cs", mix.abs2(f), lhs_m.real(f) * rhs_m.real(f));
      CheckOutcome o = base_outcome(ctx, "check_convex_cs", ts);
      o.functional = f.name();
      o.pair = p.name();
      parts.finish(std::move(o), emit);
    }
  }
}

void check_norm_sum(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_norm_sum", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const SumCsData d = draw_sum_cs(rng, ctx);
  const double v = rng.next_uniform();
  FEval sum(CMatrix(d.a + d.b), ctx.tol);
  const auto gp = [v](double x) { return std::pow(x, 2.0 * v); };
  const auto hp = [v](double x) { return std::pow(x, 2.0 * (1.0 - v)); };
  FEval lhs_m(CMatrix(apply_scalar(d.a_r, gp) + apply_scalar(d.b_r, gp)), ctx.tol);
  FEval rhs_m(CMatrix(apply_scalar(d.a_l, hp) + apply_scalar(d.b_l, hp)), ctx.tol);
  for (const NormKind &nk : *ctx.norms) {
    PartTracker parts(ctx);
    const double l = nk.gauge(sum.sigma());
    parts.add("norm_sum", l * l, nk.gauge(lhs_m.sigma()) * nk.gauge(rhs_m.sigma()));
    CheckOutcome o = base_outcome(ctx, "check_norm_sum", ts);
    o.functional = nk.name();
    parts.finish(std::move(o), emit);
  }
}

void check_cartesian_split(const CheckContext &ctx, const Emit &emit) {
  RngStream rng =
      RngStream::for_trial(ctx.seed, "check_cartesian_split", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const CMatrix re = hermitize(t);
  const CMatrix im = (t - t.adjoint()) / Complex(0, 2);
  // |Re T| and |Im T| share eigenbases with Re T and Im T.
  EigDecomp e_re = herm_eig(re, ctx.tol);
  EigDecomp e_im = herm_eig(im, ctx.tol);
  for (Eigen::Index i = 0; i < e_re.eigenvalues.size(); ++i)
    e_re.eigenvalues(i) = std::abs(e_re.eigenvalues(i));
  for (Eigen::Index i = 0; i < e_im.eigenvalues.size(); ++i)
    e_im.eigenvalues(i) = std::abs(e_im.eigenvalues(i));
  FEval ft(t, ctx.tol);
  for (const FactorPair &p : *ctx.pairs) {
    const auto g2 = [&p](double x) { return p.g2(x); };
    const auto h2 = [&p](double x) { return p.h2(x); };
    FEval lhs_m(CMatrix(apply_scalar(e_re, g2) + apply_scalar(e_im, g2)), ctx.tol);
    FEval rhs_m(CMatrix(apply_scalar(e_re, h2) + apply_scalar(e_im, h2)), ctx.tol);
    for (const LiebFunctional &f : *ctx.functionals) {
      PartTracker parts(ctx);
      parts.add("cartesian", ft.abs2(f), lhs_m.real(f) * rhs_m.real(f));
      CheckOutcome o = base_outcome(ctx, "check_cartesian_split", ts);
      o.functional = f.name();
      o.pair = p.name();
      parts.finish(std::move(o), emit);
    }
  }
}

void check_re_im_bounds(const CheckContext &ctx, const Emit &emit) {
  RngStream rng =
      RngStream::for_trial(ctx.seed, "check_re_im_bounds", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const EigDecomp er = abs_eig(t, false, ctx.tol);
  const EigDecomp el = abs_eig(t, true, ctx.tol);
  FEval f_re(hermitize(t), ctx.tol);
  FEval f_im(CMatrix((t - t.adjoint()) / Complex(0, 2)), ctx.tol);
  for (const FactorPair &p : *ctx.pairs) {
    const auto g2 = [&p](double x) { return p.g2(x); };
    const auto h2 = [&p](double x) { return p.h2(x); };
    FEval gm(CMatrix((apply_scalar(er, g2) + apply_scalar(el, g2)) / 2.0), ctx.tol);
    FEval hm(CMatrix((apply_scalar(er, h2) + apply_scalar(el, h2)) / 2.0), ctx.tol);
    for (const LiebFunctional &f : *ctx.functionals) {
      PartTracker parts(ctx);
      const double rhs = gm.real(f) * hm.real(f);
      parts.add("re_bound", f_re.abs2(f), rhs);
      parts.add("im_bound", f_im.abs2(f), rhs);
      CheckOutcome o = base_outcome(ctx, "check_re_im_bounds", ts);
      o.functional = f.name();
      o.pair = p.name();
      parts.finish(std::move(o), emit);
    }
  }
}

void check_ando_gm(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_ando_gm", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix a = draw_pd(rng, ctx.dim);
  const CMatrix b = draw_pd(rng, ctx.dim);
  FEval fa(a, ctx.tol);
  FEval fb(b, ctx.tol);
  FEval fm(geom_mean(a, b, ctx.tol), ctx.tol);
  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    const double vm = fm.real(f);
    const double va = fa.real(f);
    const double vb = fb.real(f);
    parts.add("gm_square", vm * vm, va * vb);
    parts.add("gm_scalar", vm, std::sqrt(std::max(0.0, va * vb)));
    CheckOutcome o = base_outcome(ctx, "check_ando_gm", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_log_convex(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_log_convex", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix a = draw_pd(rng, ctx.dim);
  const CMatrix b = draw_pd(rng, ctx.dim);
  const double s = rng.next_uniform();
  const double t = rng.next_uniform();

  // One spectral factorization serves all three weights.
  EigDecomp ea = herm_eig(a, ctx.tol);
  ea.eigenvalues = clamp_psd_eigs(ea.eigenvalues, ctx.tol);
  const CMatrix root = apply_fn(ea, [](double x) { return std::sqrt(x); });
  const CMatrix inv_root = apply_fn(ea, [](double x) { return 1.0 / std::sqrt(x); });
  EigDecomp mid = herm_eig(CMatrix(inv_root * b * inv_root), ctx.tol);
  mid.eigenvalues = clamp_psd_eigs(mid.eigenvalues, ctx.tol);
  const auto mean_at = [&](double w) {
    const CMatrix powered = apply_fn(mid, [w](double x) { return std::pow(x, w); });
    return hermitize(root * powered * root);
  };
  FEval at_s(mean_at(s), ctx.tol);
  FEval at_t(mean_at(t), ctx.tol);
  FEval at_mid(mean_at((s + t) / 2.0), ctx.tol);
  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    const double gm = at_mid.real(f);
    parts.add("log_convex", gm * gm, at_s.real(f) * at_t.real(f));
    CheckOutcome o = base_outcome(ctx, "check_log_convex", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_gencondii(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_gencondii", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix a = draw_ginibre(rng, ctx.dim);
  const CMatrix b = draw_ginibre(rng, ctx.dim);
  const double t = rng.next_uniform();
  FEval mixed(CMatrix(t * b.adjoint() * a + (1.0 - t) * a.adjoint() * b), ctx.tol);
  FEval first(CMatrix(t * a.adjoint() * a + (1.0 - t) * b.adjoint() * b), ctx.tol);
  FEval second(CMatrix(t * b.adjoint() * b + (1.0 - t) * a.adjoint() * a), ctx.tol);
  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    parts.add("convex_combination", mixed.abs2(f), first.real(f) * second.real(f));
    CheckOutcome o = base_outcome(ctx, "check_gencondii", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_gather(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_gather", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix a = draw_ginibre(rng, ctx.dim);
  const CMatrix b = draw_ginibre(rng, ctx.dim);
  FEval gathered(hermitize(CMatrix(b.adjoint() * a)), ctx.tol);
  FEval avg(CMatrix((a.adjoint() * a + b.adjoint() * b) / 2.0), ctx.tol);
  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    parts.add("gather", std::abs(gathered.eval(f)), avg.real(f));
    CheckOutcome o = base_outcome(ctx, "check_gather", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_gm_blocks(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_gm_blocks", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix c = draw_ginibre(rng, n);
  const CMatrix b1 = draw_pd(rng, n);
  const CMatrix b2 = draw_pd(rng, n);
  const CMatrix s1 = draw_psd(rng, n);
  const CMatrix s2 = draw_psd(rng, n);
  const CMatrix id = CMatrix::Identity(n, n);
  // A_j = C^* B_j^{-1} C + slack makes [[A_j, C^*], [C, B_j]] PSD with PD
  // diagonal blocks.
  const CMatrix a1 =
      hermitize(CMatrix(c.adjoint() * b1.inverse() * c)) + s1 + kPdShift * id;
  const CMatrix a2 =
      hermitize(CMatrix(c.adjoint() * b2.inverse() * c)) + s2 + kPdShift * id;
  const Block2x2 blk1 = make_block(a1, c, b1);
  const Block2x2 blk2 = make_block(a2, c, b2);
  const Block2x2 merged = gm_block_merge(blk1, blk2, ctx.tol);
  FEval fc(c, ctx.tol);
  FEval fa(merged.a, ctx.tol);
  FEval fb(merged.b, ctx.tol);
  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    parts.add("gm_blocks", fc.abs2(f), fa.real(f) * fb.real(f));
    CheckOutcome o = base_outcome(ctx, "check_gm_blocks", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_offblock(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_offblock", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix w = draw_psd(rng, 2 * n);
  const Block2x2 blk = split_block(w, n);
  FEval off(hermitize(CMatrix(blk.c + blk.c.adjoint())), ctx.tol);
  FEval diag_sum(CMatrix(blk.a + blk.b), ctx.tol);
  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    const double r = diag_sum.real(f);
    parts.add("offblock", off.abs2(f), r * r);
    CheckOutcome o = base_outcome(ctx, "check_offblock", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_offblockT(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_offblockT", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix t = draw_ginibre(rng, n);
  const CMatrix nrm = draw_normal(rng, n);
  const CMatrix h = draw_hermitian(rng, n);
  const CMatrix id = CMatrix::Identity(n, n);

  const PolarParts pt = polar_parts(t, ctx.tol);
  FEval re2(CMatrix(t + t.adjoint()), ctx.tol);
  FEval gram_id(CMatrix(t.adjoint() * t + id), ctx.tol);
  FEval abs_sum(CMatrix(pt.abs_t + pt.abs_tstar), ctx.tol);

  const EigDecomp en = abs_eig(nrm, false, ctx.tol);
  FEval n_re2(CMatrix(nrm + nrm.adjoint()), ctx.tol);
  FEval n_abs2(apply_scalar(en, [](double x) { return 2.0 * x; }), ctx.tol);

  EigDecomp eh = herm_eig(h, ctx.tol);
  for (Eigen::Index i = 0; i < eh.eigenvalues.size(); ++i)
    eh.eigenvalues(i) = std::abs(eh.eigenvalues(i));
  FEval h2(CMatrix(2.0 * h), ctx.tol);
  FEval habs2(apply_scalar(eh, [](double x) { return 2.0 * x; }), ctx.tol);

  for (const LiebFunctional &f : *ctx.functionals) {
    PartTracker parts(ctx);
    const double lhs = re2.abs2(f);
    const double r1 = gram_id.real(f);
    const double r2 = abs_sum.real(f);
    parts.add("gram_plus_id", lhs, r1 * r1);
    parts.add("abs_sum", lhs, r2 * r2);
    const double rn = n_abs2.real(f);
    parts.add("normal", n_re2.abs2(f), rn * rn);
    const double rh = habs2.real(f);
    parts.add("self_adjoint", h2.abs2(f), rh * rh);
    CheckOutcome o = base_outcome(ctx, "check_offblockT", ts);
    o.functional = f.name();
    parts.finish(std::move(o), emit);
  }
}

void check_lemma04(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_lemma04", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_psd(rng, ctx.dim);
  const CVector x = draw_unit_vector(rng, ctx.dim);
  const CVector y = draw_unit_vector(rng, ctx.dim);
  const Complex txy = y.dot(t * x);
  const double txx = x.dot(t * x).real();
  const double tyy = y.dot(t * y).real();
  PartTracker parts(ctx);
  parts.add("sesquilinear_cs", std::norm(txy), txx * tyy);
  parts.finish(base_outcome(ctx, "check_lemma04", ts), emit);
}

CVector embed_top(const CVector &x, Eigen::Index total) {
  CVector v = CVector::Zero(total);
  v.head(x.size()) = x;
  return v;
}

CVector embed_bottom(const CVector &y, Eigen::Index total) {
  CVector v = CVector::Zero(total);
  v.tail(y.size()) = y;
  return v;
}

void check_thm02(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_thm02", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix w = draw_psd(rng, 2 * n);
  const CVector x = draw_unit_vector(rng, n);
  const CVector y = draw_unit_vector(rng, n);
  const Block2x2 blk = split_block(w, n);
  const PinchDecomp dec = pinch_decompose(blk, ctx.tol);
  const CMatrix d = dec.reconstruct();
  const CVector xe = embed_top(x, 2 * n);
  const CVector ye = embed_bottom(y, 2 * n);
  const double lhs = std::norm(y.dot(blk.c * x));
  const double rhs = xe.dot(d * xe).real() * ye.dot(d * ye).real();
  PartTracker parts(ctx);
  parts.add("pinch_cs", lhs, rhs);
  parts.finish(base_outcome(ctx, "check_thm02", ts), emit);
}

void check_thm12(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_thm12", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix t = draw_ginibre(rng, n);
  const CVector x = draw_unit_vector(rng, n);
  const CVector y = draw_unit_vector(rng, n);
  for (const FactorPair &p : *ctx.pairs) {
    const Block2x2 blk = lemma03_block(t, p, ctx.tol);
    const PinchDecomp dec = pinch_decompose(blk, ctx.tol);
    const CMatrix d = dec.reconstruct();
    const CVector xe = embed_top(x, 2 * n);
    const CVector ye = embed_bottom(y, 2 * n);
    const CVector xb = embed_bottom(x, 2 * n);
    PartTracker parts(ctx);
    parts.add("vector_cs", std::norm(y.dot(t * x)),
              xe.dot(d * xe).real() * ye.dot(d * ye).real());
    parts.add("diagonal_case", std::norm(x.dot(t * x)),
              xe.dot(d * xe).real() * xb.dot(d * xb).real());
    CheckOutcome o = base_outcome(ctx, "check_thm12", ts);
    o.pair = p.name();
    parts.finish(std::move(o), emit);
  }
}

void check_nee1(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_nee1", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const EigDecomp er = abs_eig(t, false, ctx.tol);
  const EigDecomp el = abs_eig(t, true, ctx.tol);
  const CMatrix re = hermitize(t);
  const double t_norm = er.eigenvalues.size() ? er.eigenvalues(0) : 0.0;
  const CMatrix abs_t = apply_scalar(er, [](double x) { return x; });
  const CMatrix abs_ts = apply_scalar(el, [](double x) { return x; });
  for (const FactorPair &p : *ctx.pairs) {
    const CMatrix s = (apply_scalar(er, [&p](double x) { return p.g2(x); }) +
                       apply_scalar(el, [&p](double x) { return p.h2(x); })) /
                      2.0;
    const double rhs = 0.5 * (op_norm_herm(CMatrix(s + re), ctx.tol) +
                              op_norm_herm(CMatrix(s - re), ctx.tol));
    const double rhs_quarter =
        0.25 * (op_norm_herm(CMatrix(abs_t + abs_ts + 2.0 * re), ctx.tol) +
                op_norm_herm(CMatrix(abs_t + abs_ts - 2.0 * re), ctx.tol));
    PartTracker parts(ctx);
    parts.add("split_norm", t_norm, rhs);
    parts.add("quarter_form", t_norm, rhs_quarter);
    CheckOutcome o = base_outcome(ctx, "check_nee1", ts);
    o.pair = p.name();
    parts.finish(std::move(o), emit);
  }
}

void check_thm14(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_thm14", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const int n = ctx.dim;
  const CMatrix t = draw_ginibre(rng, n);
  const CVector x = draw_unit_vector(rng, n);
  const CVector y = draw_unit_vector(rng, n);
  const CMatrix a = draw_ginibre(rng, n);
  const CMatrix b = draw_ginibre(rng, n);

  const EigDecomp t_r = abs_eig(t, false, ctx.tol);
  const EigDecomp t_l = abs_eig(t, true, ctx.tol);
  const EigDecomp a_r = abs_eig(a, false, ctx.tol);
  const EigDecomp a_l = abs_eig(a, true, ctx.tol);
  const EigDecomp b_r = abs_eig(b, false, ctx.tol);
  const EigDecomp b_l = abs_eig(b, true, ctx.tol);
  const CMatrix re = hermitize(t);
  const CMatrix im = (t - t.adjoint()) / Complex(0, 2);

  for (const FactorPair &p : *ctx.pairs) {
    const auto g2 = [&p](double x2) { return p.g2(x2); };
    const auto h2 = [&p](double x2) { return p.h2(x2); };
    const CMatrix fsum = apply_scalar(t_r, g2) + apply_scalar(t_l, g2);
    const CMatrix gsum = apply_scalar(t_r, h2) + apply_scalar(t_l, h2);
    const double xf = x.dot(fsum * x).real();
    const double yg = y.dot(gsum * y).real();
    const double rhs = 0.5 * std::sqrt(std::max(0.0, xf * yg));

    const CMatrix f_ab = apply_scalar(a_r, g2) + apply_scalar(b_r, g2);
    const CMatrix g_ab = apply_scalar(a_l, h2) + apply_scalar(b_l, h2);
    const double rhs_sum = x.dot(f_ab * x).real() * y.dot(g_ab * y).real();

    PartTracker parts(ctx);
    parts.add("re_vector", std::abs(y.dot(re * x)), rhs);
    parts.add("im_vector", std::abs(y.dot(im * x)), rhs);
    parts.add("sum_vector", std::norm(y.dot((a + b) * x)), rhs_sum);
    CheckOutcome o = base_outcome(ctx, "check_thm14", ts);
    o.pair = p.name();
    parts.finish(std::move(o), emit);
  }
}

void check_eq16_15(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_eq16_15", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const EigDecomp er = abs_eig(t, false, ctx.tol);
  const EigDecomp el = abs_eig(t, true, ctx.tol);
  const CMatrix re = hermitize(t);
  const CMatrix im = (t - t.adjoint()) / Complex(0, 2);
  for (const FactorPair &p : *ctx.pairs) {
    const CMatrix gsum = apply_scalar(er, [&p](double x) { return p.g2(x); }) +
                         apply_scalar(el, [&p](double x) { return p.g2(x); });
    const CMatrix hsum = apply_scalar(er, [&p](double x) { return p.h2(x); }) +
                         apply_scalar(el, [&p](double x) { return p.h2(x); });
    const auto block_min = [&](const CMatrix &diag_a, const CMatrix &off,
                               const CMatrix &diag_b) {
      const Block2x2 blk = make_block(diag_a, off, diag_b);
      return lambda_min_herm(blk.assembled, ctx.tol);
    };
    PartTracker parts(ctx);
    parts.add("re_block", -block_min(gsum / 2.0, re, hsum / 2.0), 0.0);
    parts.add("im_block", -block_min(gsum / 2.0, im, hsum / 2.0), 0.0);
    parts.add("re_plus_im_block", -block_min(gsum, CMatrix(re + im), hsum), 0.0);
    CheckOutcome o = base_outcome(ctx, "check_eq16_15", ts);
    o.pair = p.name();
    parts.finish(std::move(o), emit);
  }
}

void check_rem_imre(const CheckContext &ctx, const Emit &emit) {
  RngStream rng = RngStream::for_trial(ctx.seed, "check_rem_imre", ctx.dim, ctx.trial);
  const uint64_t ts = rng.state();
  const CMatrix t = draw_ginibre(rng, ctx.dim);
  const EigDecomp er = abs_eig(t, false, ctx.tol);
  const EigDecomp el = abs_eig(t, true, ctx.tol);
  const CMatrix re = hermitize(t);
  const CMatrix im = (t - t.adjoint()) / Complex(0, 2);
  const CMatrix abs_half = (apply_scalar(er, [](double x) { return x; }) +
                            apply_scalar(el, [](double x) { return x; })) /
                           2.0;
  for (const FactorPair &p : *ctx.pairs) {
    const CMatrix gsum = apply_scalar(er, [&p](double x) { return p.g2(x); }) +
                         apply_scalar(el, [&p](double x) { return p.g2(x); });
    const CMatrix hsum = apply_scalar(er, [&p](double x) { return p.h2(x); }) +
                         apply_scalar(el, [&p](double x) { return p.h2(x); });
    bool shifted_full = false, shifted_half = false;
    const CMatrix mean_full =
        regularized_geom_mean(gsum, hsum, ctx.tol, shifted_full);
    const CMatrix mean_half = regularized_geom_mean(CMatrix(gsum / 2.0),
                                                    CMatrix(hsum / 2.0), ctx.tol,
                                                    shifted_half);
    const CMatrix cross = re + im;
    PartTracker parts(ctx);
    parts.add_loewner("cross_plus", cross, mean_full);
    parts.add_loewner("cross_minus", CMatrix(-cross), mean_full);
    parts.add_loewner("re_plus", re, mean_half);
    parts.add_loewner("re_minus", CMatrix(-re), mean_half);
    parts.add_loewner("im_plus", im, mean_half);
    parts.add_loewner("im_minus", CMatrix(-im), mean_half);
    parts.add_loewner("re_abs_half", re, abs_half);
    parts.add_loewner("re_abs_half_neg", CMatrix(-re), abs_half);
    parts.add_loewner("im_abs_half", im, abs_half);
    parts.add_loewner("im_abs_half_neg", CMatrix(-im), abs_half);
    CheckOutcome o = base_outcome(ctx, "check_rem_imre", ts);
    o.pair = p.name();
    if (shifted_full || shifted_half) o.note = "gm_operands_shifted_1e-6";
    parts.finish(std::move(o), emit);
  }
}

void run_counterexample(const CheckContext &ctx, const Emit &emit) {
  CheckOutcome o = reproduce_counterexample();
  o.seed = ctx.seed;
  emit(std::move(o));
}

// ---------------------------------------------------------------------------
// Registry.

struct CheckDef {
  const char *id;
  CheckAxes axes;
  void (*fn)(const CheckContext &, const Emit &);
  bool fixed_instance = false; // ignores trials/dims
};

const std::vector<CheckDef> &registry() {
  static const std::vector<CheckDef> defs = {
      {"check_cs_norm", {false, false, true}, &check_cs_norm},
      {"check_det_seiler", {}, &check_det_seiler},
      {"check_lieb_cs", {true, true, false}, &check_lieb_cs},
      {"check_lieb_weighted", {true, false, false}, &check_lieb_weighted},
      {"check_sum_cs", {true, true, false}, &check_sum_cs},
      {"check_convex_cs", {true, true, false}, &check_convex_cs},
      {"check_norm_sum", {false, false, true}, &check_norm_sum},
      {"check_cartesian_split", {true, true, false}, &check_cartesian_split},
      {"check_re_im_bounds", {true, true, false}, &check_re_im_bounds},
      {"check_ando_gm", {true, false, false}, &check_ando_gm},
      {"check_log_convex", {true, false, false}, &check_log_convex},
      {"check_gencondii", {true, false, false}, &check_gencondii},
      {"check_gather", {true, false, false}, &check_gather},
      {"check_gm_blocks", {true, false, false}, &check_gm_blocks},
      {"check_offblock", {true, false, false}, &check_offblock},
      {"check_offblockT", {true, false, false}, &check_offblockT},
      {"check_lemma04", {}, &check_lemma04},
      {"check_thm02", {}, &check_thm02},
      {"check_thm12", {false, true, false}, &check_thm12},
      {"check_nee1", {false, true, false}, &check_nee1},
      {"check_thm14", {false, true, false}, &check_thm14},
      {"check_eq16_15", {false, true, false}, &check_eq16_15},
      {"check_rem_imre", {false, true, false}, &check_rem_imre},
      {"reproduce_counterexample", {}, &run_counterexample, true},
  };
  return defs;
}

const CheckDef &find_check(const std::string &id) {
  for (const CheckDef &d : registry())
    if (id == d.id) return d;
  throw Error(ErrorCode::InvalidArgument, "unknown check: " + id);
}

} // namespace

std::vector<std::string> all_check_ids() {
  std::vector<std::string> ids;
  for (const CheckDef &d : registry()) ids.emplace_back(d.id);
  return ids;
}

CheckAxes check_axes(const std::string &check_id) { return find_check(check_id).axes; }

std::vector<LiebFunctional> default_functionals() {
  return {LiebFunctional::determinant(),
          LiebFunctional::permanent(),
          LiebFunctional::spectral_radius(),
          LiebFunctional::elem_sym(2),
          LiebFunctional::ui_norm(NormKind::frobenius()),
          LiebFunctional::ui_norm(NormKind::trace_norm()),
          LiebFunctional::ui_norm(NormKind::operator_norm()),
          LiebFunctional::ui_norm(NormKind::ky_fan(2)),
          LiebFunctional::ui_norm(NormKind::schatten(3.0))};
}

std::vector<FactorPair> default_pairs() {
  return {FactorPair::sqrt_pair(), FactorPair::power(0.25), FactorPair::power(0.5),
          FactorPair::power(0.75)};
}

LiebFunctional parse_functional(const std::string &name) {
  if (name == "det") return LiebFunctional::determinant();
  if (name == "per") return LiebFunctional::permanent();
  if (name == "rho") return LiebFunctional::spectral_radius();
  if (name.size() > 1 && name[0] == 'e' &&
      name.find_first_not_of("0123456789", 1) == std::string::npos)
    return LiebFunctional::elem_sym(std::stoi(name.substr(1)));
  if (name == "operator") return LiebFunctional::ui_norm(NormKind::operator_norm());
  if (name == "trace") return LiebFunctional::ui_norm(NormKind::trace_norm());
  if (name == "frobenius") return LiebFunctional::ui_norm(NormKind::frobenius());
  if (name.rfind("schatten", 0) == 0)
    return LiebFunctional::ui_norm(NormKind::schatten(std::stod(name.substr(8))));
  if (name.rfind("kyfan", 0) == 0)
    return LiebFunctional::ui_norm(NormKind::ky_fan(std::stoi(name.substr(5))));
  throw Error(ErrorCode::InvalidArgument, "unknown functional: " + name);
}

FactorPair parse_pair(const std::string &name) {
  if (name == "sqrt") return FactorPair::sqrt_pair();
  if (name.rfind("power", 0) == 0) return FactorPair::power(std::stod(name.substr(5)));
  throw Error(ErrorCode::InvalidArgument, "unknown factor pair: " + name);
}

void validate_config(const RunConfig &config) {
  if (config.trials < 1)
    throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (config.dims.empty())
    throw Error(ErrorCode::InvalidArgument, "at least one dimension is required");
  for (int d : config.dims)
    if (d < 2 || d > 16)
      throw Error(ErrorCode::InvalidArgument, "dims must be within [2, 16]");
  if (config.tol_abs <= 0.0 || config.tol_rel <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  for (const std::string &c : config.checks)
    if (c != "all") (void)find_check(c);
  for (const std::string &f : config.functionals) (void)parse_functional(f);
  for (const std::string &p : config.pairs) (void)parse_pair(p);
}

bool Report::all_passed() const {
  for (const auto &[id, s] : summary)
    if (s.failures > 0 || s.inconclusive > 0) return false;
  return true;
}

bool Report::any_inconclusive() const {
  for (const auto &[id, s] : summary)
    if (s.inconclusive > 0) return true;
  return false;
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv("MATRIXCS_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct WorkItem {
  const CheckDef *def;
  int dim;
};

} // namespace

Report run_corpus(const RunConfig &config) {
  validate_config(config);

  std::vector<LiebFunctional> functionals;
  if (config.functionals.empty())
    functionals = default_functionals();
  else
    for (const std::string &f : config.functionals)
      functionals.push_back(parse_functional(f));

  std::vector<FactorPair> pairs;
  if (config.pairs.empty())
    pairs = default_pairs();
  else
    for (const std::string &p : config.pairs) pairs.push_back(parse_pair(p));

  std::vector<NormKind> norms;
  for (const LiebFunctional &f : functionals)
    if (f.tag == LiebFunctional::Tag::UINorm) norms.push_back(f.norm);

  std::vector<const CheckDef *> selected;
  const bool want_all =
      config.checks.empty() ||
      std::find(config.checks.begin(), config.checks.end(), "all") !=
          config.checks.end();
  if (want_all) {
    for (const CheckDef &d : registry()) selected.push_back(&d);
  } else {
    for (const std::string &c : config.checks) selected.push_back(&find_check(c));
  }

  std::vector<WorkItem> items;
  for (const CheckDef *def : selected) {
    if (def->fixed_instance) {
      items.push_back({def, 3});
      continue;
    }
    for (int dim : config.dims) items.push_back({def, dim});
  }

  std::vector<std::vector<CheckOutcome>> results(items.size());
  std::atomic<size_t> next{0};
  const int threads = std::min<int>(resolve_threads(config.threads),
                                    static_cast<int>(items.size()) > 0
                                        ? static_cast<int>(items.size())
                                        : 1);

  const auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= items.size()) return;
      const WorkItem &item = items[idx];
      std::vector<CheckOutcome> &out = results[idx];

      // Permanent evaluations stop at kCorpusPermanentMaxDim.
      std::vector<LiebFunctional> fns;
      for (const LiebFunctional &f : functionals)
        if (!(f.tag == LiebFunctional::Tag::Permanent &&
              item.dim > kCorpusPermanentMaxDim))
          fns.push_back(f);

      CheckContext ctx;
      ctx.seed = config.seed;
      ctx.dim = item.dim;
      ctx.tol_abs = config.tol_abs;
      ctx.tol_rel = config.tol_rel;
      ctx.functionals = &fns;
      ctx.pairs = &pairs;
      ctx.norms = &norms;

      const Emit emit = [&out](CheckOutcome &&o) { out.push_back(std::move(o)); };
      const int trials = item.def->fixed_instance ? 1 : config.trials;
      for (int t = 0; t < trials; ++t) {
        ctx.trial = static_cast<uint64_t>(t);
        try {
          item.def->fn(ctx, emit);
        } catch (const Error &e) {
          CheckOutcome o = base_outcome(ctx, item.def->id, 0);
          o.pass = false;
          o.inconclusive = true;
          o.note = std::string(error_code_name(e.code())) + ": " + e.what();
          out.push_back(std::move(o));
        }
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread &th : pool) th.join();
  }

  Report report;
  report.config = config;
  for (std::vector<CheckOutcome> &chunk : results)
    for (CheckOutcome &o : chunk) report.outcomes.push_back(std::move(o));
  std::stable_sort(report.outcomes.begin(), report.outcomes.end(),
                   [](const CheckOutcome &a, const CheckOutcome &b) {
                     return std::tie(a.check_id, a.functional, a.pair, a.dim,
                                     a.trial) <
                            std::tie(b.check_id, b.functional, b.pair, b.dim,
                                     b.trial);
                   });

  for (const CheckOutcome &o : report.outcomes) {
    CheckSummary &s = report.summary[o.check_id];
    if (s.trials == 0) s.min_margin = std::numeric_limits<double>::infinity();
    ++s.trials;
    if (o.inconclusive)
      ++s.inconclusive;
    else if (!o.pass)
      ++s.failures;
    s.min_margin = std::min(s.min_margin, o.margin);
  }
  return report;
}

CMatrix counterexample_matrix() {
  CMatrix t = CMatrix::Zero(3, 3);
  t(0, 1) = 1.0;
  t(1, 2) = 1.0;
  return t;
}

CheckOutcome reproduce_counterexample() {
  const Tolerance tol;
  const CMatrix t = counterexample_matrix();
  const PolarParts parts = polar_parts(t, tol);
  const CMatrix abs_sum = parts.abs_t + parts.abs_tstar;
  const CMatrix herm_sum = t + t.adjoint();

  const SvdDecomp s_abs = svd(abs_sum, tol);
  const SvdDecomp s_herm = svd(herm_sum, tol);
  const double r2 = std::sqrt(2.0);
  double dev = 0.0;
  dev = std::max(dev, std::abs(s_abs.singular_values(0) - 2.0));
  dev = std::max(dev, std::abs(s_abs.singular_values(1) - 1.0));
  dev = std::max(dev, std::abs(s_abs.singular_values(2) - 1.0));
  dev = std::max(dev, std::abs(s_herm.singular_values(0) - r2));
  dev = std::max(dev, std::abs(s_herm.singular_values(1) - r2));
  dev = std::max(dev, std::abs(s_herm.singular_values(2) - 0.0));

  const CMatrix abs_herm = polar_parts(herm_sum, tol).abs_t;
  const double lam_min = lambda_min_herm(CMatrix(abs_sum - abs_herm), tol);
  dev = std::max(dev, std::abs(lam_min - (1.0 - r2)));
  const bool order_fails = !loewner_leq(abs_herm, abs_sum, tol) && lam_min < -1e-3;

  CheckOutcome o;
  o.check_id = "reproduce_counterexample";
  o.dim = 3;
  o.lhs = dev;
  o.rhs = 1e-10;
  o.margin = o.rhs - o.lhs;
  o.pass = (o.margin >= 0.0) && order_fails;
  o.note = order_fails ? "order_violation_confirmed" : "order_violation_missing";
  return o;
}

std::string report_to_json(const Report &report) {
  nlohmann::json j;
  j["config"] = {{"seed", report.config.seed},
                 {"trials", report.config.trials},
                 {"dims", report.config.dims},
                 {"tol_abs", report.config.tol_abs},
                 {"tol_rel", report.config.tol_rel},
                 {"checks", report.config.checks},
                 {"functionals", report.config.functionals},
                 {"pairs", report.config.pairs}};
  nlohmann::json outcomes = nlohmann::json::array();
  for (const CheckOutcome &o : report.outcomes) {
    nlohmann::json jo = {{"check_id", o.check_id}, {"trial", o.trial},
                         {"dim", o.dim},           {"lhs", o.lhs},
                         {"rhs", o.rhs},           {"margin", o.margin},
                         {"pass", o.pass},         {"seed", o.seed}};
    if (!o.functional.empty()) jo["functional"] = o.functional;
    if (!o.pair.empty()) jo["pair"] = o.pair;
    if (o.inconclusive) jo["inconclusive"] = true;
    if (!o.note.empty()) jo["note"] = o.note;
    outcomes.push_back(std::move(jo));
  }
  j["outcomes"] = std::move(outcomes);
  nlohmann::json summary;
  for (const auto &[id, s] : report.summary)
    summary[id] = {{"trials", s.trials},
                   {"failures", s.failures},
                   {"inconclusive", s.inconclusive},
                   {"min_margin", s.min_margin}};
  j["summary"] = std::move(summary);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const Report &report) {
  std::ostringstream out;
  out << "check_id,functional,pair,dim,trial,lhs,rhs,margin,pass,inconclusive,"
         "seed,note\n";
  char buf[512];
  for (const CheckOutcome &o : report.outcomes) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%d,%llu,%.17g,%.17g,%.17g,%d,%d,%llu,%s\n",
                  o.check_id.c_str(), o.functional.c_str(), o.pair.c_str(), o.dim,
                  static_cast<unsigned long long>(o.trial), o.lhs, o.rhs, o.margin,
                  o.pass ? 1 : 0, o.inconclusive ? 1 : 0,
                  static_cast<unsigned long long>(o.seed), o.note.c_str());
    out << buf;
  }
  return out.str();
}

} // namespace matrixcs
