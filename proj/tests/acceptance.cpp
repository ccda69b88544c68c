// Acceptance harness: one pass/fail line per criterion, exit code equals
// the number of failed criteria. The first argument is the path to the CLI
// binary (used by the determinism criterion).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "matrixcs/blocks.hpp"
#include "matrixcs/corpus.hpp"
#include "matrixcs/ensembles.hpp"
#include "matrixcs/lieb.hpp"
#include "matrixcs/means.hpp"
#include "oracles.hpp"

using namespace matrixcs;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string &name, bool pass, const std::string &detail) {
  std::cout << (pass ? "PASS" : "FAIL") << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double op_norm(const CMatrix &h) {
  const EigDecomp eig = herm_eig(h);
  return eig.eigenvalues.cwiseAbs().maxCoeff();
}

std::string run_and_capture(const std::string &cmd) {
  std::array<char, 4096> buffer{};
  std::string output;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    output.append(buffer.data(), n);
  pclose(pipe);
  return output;
}

void criterion_counterexample() {
  const auto start = Clock::now();
  const CheckOutcome o = reproduce_counterexample();
  const double elapsed = seconds_since(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "max deviation %.2e, %.3f s", o.lhs,
                elapsed);
  report("counterexample reproduction", o.pass && elapsed < 1.0, detail);
}

void criterion_full_corpus() {
  const auto start = Clock::now();
  RunConfig config;
  config.seed = 42;
  config.trials = 1000;
  config.dims = {2, 3, 4, 5, 6};
  config.tol_rel = 1e-8;
  const Report rep = run_corpus(config);
  const double elapsed = seconds_since(start);
  uint64_t fails = 0, inconclusive = 0, trials = 0;
  for (const auto &[id, s] : rep.summary) {
    fails += s.failures;
    inconclusive += s.inconclusive;
    trials += s.trials;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%llu outcomes, %llu failures, %llu inconclusive, %.1f s",
                static_cast<unsigned long long>(trials),
                static_cast<unsigned long long>(fails),
                static_cast<unsigned long long>(inconclusive), elapsed);
  report("full-corpus theorem suite",
         fails == 0 && inconclusive == 0 && elapsed < 300.0, detail);
}

void criterion_equality_attainment() {
  // Hermitian PSD T with the sqrt pair: S = (g^2(|T|) + h^2(|T*|))/2 = T,
  // so the split-norm bound is attained exactly.
  int attained = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng = RngStream::for_trial(42, "acceptance_nee1_equality", 3,
                                         static_cast<uint64_t>(trial));
    const CMatrix t = draw_psd(rng, 3);
    const PolarParts parts = polar_parts(t);
    const FactorPair p = FactorPair::sqrt_pair();
    const CMatrix s =
        (apply_fn(parts.abs_t, [&p](double x) { return p.g2(x); }) +
         apply_fn(parts.abs_tstar, [&p](double x) { return p.h2(x); })) /
        2.0;
    const double lhs = op_norm(t);
    const double rhs = 0.5 * (op_norm(CMatrix(s + parts.re_t)) +
                              op_norm(CMatrix(s - parts.re_t)));
    const double margin = rhs - lhs;
    worst = std::max(worst, std::abs(margin));
    if (margin <= 1e-9) ++attained;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "%d/100 attained, worst |margin| %.2e",
                attained, worst);
  report("equality attainment (split-norm bound, sqrt pair)", attained == 100,
         detail);
}

void criterion_pinch_roundtrip() {
  double worst_resid = 0.0, worst_unitary = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + trial % 3;
    RngStream rng = RngStream::for_trial(42, "acceptance_pinch_roundtrip", n,
                                         static_cast<uint64_t>(trial));
    const CMatrix w = draw_psd(rng, 2 * n);
    const PinchDecomp dec = pinch_decompose(split_block(w, n));
    worst_resid = std::max(worst_resid, (dec.reconstruct() - w).norm());
    const auto defect = [](const CMatrix &u) {
      return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
    };
    worst_unitary = std::max({worst_unitary, defect(dec.u), defect(dec.v)});
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "residual %.2e, unitarity %.2e",
                worst_resid, worst_unitary);
  report("pinch decomposition round-trip (500 blocks)",
         worst_resid <= 1e-9 && worst_unitary <= 1e-10, detail);
}

void criterion_remark13_similarity() {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    RngStream rng = RngStream::for_trial(42, "acceptance_block_similarity", 3,
                                         static_cast<uint64_t>(trial));
    const CMatrix t = draw_ginibre(rng, 3);
    const PinchDecomp dec = remark13_decompose(t, FactorPair::sqrt_pair());
    const PolarParts parts = polar_parts(t);
    const CMatrix mid = (parts.abs_t + parts.abs_tstar) / 2.0;
    const auto gap = [&](const CMatrix &got, const CMatrix &want) {
      const std::vector<double> a = oracles::herm_eigenvalues_eigen(got);
      const std::vector<double> b = oracles::herm_eigenvalues_eigen(want);
      double g = 0.0;
      for (size_t i = 0; i < a.size(); ++i) g = std::max(g, std::abs(a[i] - b[i]));
      return g;
    };
    worst = std::max({worst, gap(dec.top, CMatrix(mid + parts.re_t)),
                      gap(dec.bottom, CMatrix(mid - parts.re_t))});
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "worst eigenvalue gap %.2e", worst);
  report("factor-block similarity (200 random 3x3)", worst <= 1e-8, detail);
}

void criterion_scalar_reduction() {
  // Diagonal A, B with X = I: every norm inequality must reduce to the
  // scalar Cauchy-Schwarz computation on the diagonal entries.
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RngStream rng = RngStream::for_trial(42, "acceptance_scalar_reduction", 3,
                                         static_cast<uint64_t>(trial));
    const int n = 3;
    CMatrix a = CMatrix::Zero(n, n), b = CMatrix::Zero(n, n);
    std::vector<double> av(n), bv(n);
    for (int i = 0; i < n; ++i) {
      a(i, i) = rng.next_complex_gaussian();
      b(i, i) = rng.next_complex_gaussian();
      av[static_cast<size_t>(i)] = std::abs(a(i, i));
      bv[static_cast<size_t>(i)] = std::abs(b(i, i));
    }
    const CMatrix x = CMatrix::Identity(n, n);
    for (const NormKind &nk :
         {NormKind::operator_norm(), NormKind::trace_norm(), NormKind::frobenius(),
          NormKind::ky_fan(2), NormKind::schatten(3.0)}) {
      const double mid = nk.eval(CMatrix(a.adjoint() * x * b));
      const double lib_margin = nk.eval(CMatrix(a * a.adjoint() * x)) *
                                    nk.eval(CMatrix(x * b * b.adjoint())) -
                                mid * mid;
      // Direct scalar route: singular values are |a_i| |b_i|, |a_i|^2, |b_i|^2.
      std::vector<double> sm(static_cast<size_t>(n)), sa(static_cast<size_t>(n)),
          sb(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        sm[static_cast<size_t>(i)] = av[static_cast<size_t>(i)] * bv[static_cast<size_t>(i)];
        sa[static_cast<size_t>(i)] = av[static_cast<size_t>(i)] * av[static_cast<size_t>(i)];
        sb[static_cast<size_t>(i)] = bv[static_cast<size_t>(i)] * bv[static_cast<size_t>(i)];
      }
      const double g = nk.gauge(sm);
      const double scalar_margin = nk.gauge(sa) * nk.gauge(sb) - g * g;
      worst = std::max(worst, std::abs(lib_margin - scalar_margin));
      if (scalar_margin < -1e-12) worst = 1.0; // scalar CS itself must hold
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof(detail), "worst margin mismatch %.2e", worst);
  report("scalar Cauchy-Schwarz reduction", worst <= 1e-12, detail);
}

void criterion_gm_oracle() {
  double worst_entry = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng = RngStream::for_trial(42, "acceptance_gm_oracle", 3,
                                         static_cast<uint64_t>(trial));
    const CMatrix a = draw_pd(rng, 3);
    const CMatrix b = draw_pd(rng, 3);
    const CMatrix lib = geom_mean(a, b);
    const CMatrix oracle = oracles::riccati_geom_mean(a, b);
    worst_entry = std::max(worst_entry, (lib - oracle).cwiseAbs().maxCoeff());
  }

  int ando_ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    RngStream rng = RngStream::for_trial(42, "acceptance_ando_bound", 3,
                                         static_cast<uint64_t>(trial));
    const CMatrix b = draw_pd(rng, 3);
    const CMatrix c = draw_hermitian(rng, 3);
    const CMatrix a =
        (CMatrix(c * b.inverse() * c) + CMatrix(c * b.inverse() * c).adjoint()) /
            2.0 +
        kPdShift * CMatrix::Identity(3, 3);
    const CMatrix mean = geom_mean(a, b);
    if (loewner_leq(c, mean) && loewner_leq(CMatrix(-c), mean)) ++ando_ok;
  }

  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "worst entry gap %.2e, Ando bound %d/1000", worst_entry, ando_ok);
  report("geometric-mean oracle agreement",
         worst_entry <= 1e-9 && ando_ok == 1000, detail);
}

void criterion_determinism(const std::string &cli) {
  const std::string args =
      " verify --checks all --seed 42 --trials 50 --dims 3";
  const std::string one =
      run_and_capture("MATRIXCS_THREADS=1 '" + cli + "'" + args + " 2>/dev/null");
  const std::string eight =
      run_and_capture("MATRIXCS_THREADS=8 '" + cli + "'" + args + " 2>/dev/null");
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%zu bytes each", one.size());
  report("determinism across thread counts",
         !one.empty() && one == eight, detail);
}

} // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-cli>\n";
    return 64;
  }
  criterion_counterexample();
  criterion_full_corpus();
  criterion_equality_attainment();
  criterion_pinch_roundtrip();
  criterion_remark13_similarity();
  criterion_scalar_reduction();
  criterion_gm_oracle();
  criterion_determinism(argv[1]);
  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED")
            << "\n";
  return failures;
}
