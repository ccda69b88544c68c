#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "matrixcs/ensembles.hpp"
#include "matrixcs/linalg.hpp"
#include "matrixcs/means.hpp"
#include "oracles.hpp"

using namespace matrixcs;

namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

} // namespace

TEST_CASE("geom_mean: idempotence") {
  RngStream rng(101);
  const CMatrix p = draw_pd(rng, 3);
  CHECK((geom_mean(p, p) - p).norm() < 1e-9 * (1.0 + p.norm()));
}

TEST_CASE("geom_mean: commuting diagonal case") {
  const CMatrix m = geom_mean(diag2(2, 8), diag2(8, 2));
  CHECK((m - diag2(4, 4)).norm() < 1e-10);
}

TEST_CASE("geom_mean: matches the Riccati Newton oracle") {
  CMatrix a(2, 2), b(2, 2);
  a << 2, 1, 1, 1;
  b << 1, 0, 0, 4;
  const CMatrix lib = geom_mean(a, b);
  const CMatrix oracle = oracles::riccati_geom_mean(a, b);
  CHECK((lib - oracle).norm() < 1e-10);
  // The defining Riccati equation itself: X A^{-1} X = B.
  CHECK((lib * a.inverse() * lib - b).norm() < 1e-9);
}

TEST_CASE("geom_mean: rejects PSD-but-singular input") {
  const CMatrix singular = diag2(1, 0);
  CHECK_THROWS_AS(geom_mean(singular, CMatrix::Identity(2, 2)), Error);
}

TEST_CASE("geom_mean: symmetry on random PD pairs") {
  RngStream rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = draw_pd(rng, 3);
    const CMatrix b = draw_pd(rng, 3);
    CHECK((geom_mean(a, b) - geom_mean(b, a)).norm() <
          1e-8 * (1.0 + a.norm() + b.norm()));
  }
}

TEST_CASE("geom_mean: congruence invariance") {
  RngStream rng(107);
  const CMatrix a = draw_pd(rng, 3);
  const CMatrix b = draw_pd(rng, 3);
  const CMatrix x = draw_ginibre(rng, 3) + 2.0 * CMatrix::Identity(3, 3);
  const CMatrix lhs = x.adjoint() * geom_mean(a, b) * x;
  const CMatrix rhs = geom_mean(CMatrix(x.adjoint() * a * x),
                                CMatrix(x.adjoint() * b * x));
  CHECK((lhs - rhs).norm() < 1e-7 * (1.0 + rhs.norm()));
}

TEST_CASE("geom_mean: monotone in the Loewner order") {
  RngStream rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = draw_pd(rng, 3);
    const CMatrix bump = draw_psd(rng, 3);
    const CMatrix a2 = a + bump; // a <= a2 by construction
    const CMatrix b = draw_pd(rng, 3);
    CHECK(loewner_leq(geom_mean(a, b), geom_mean(a2, b)));
  }
}

TEST_CASE("geom_mean: Ando bound +-C <= A # B for PSD blocks") {
  RngStream rng(113);
  for (int trial = 0; trial < 20; ++trial) {
    // [[A, C], [C, B]] >= 0 with Hermitian C: build as A = C B^{-1} C + shift.
    const CMatrix b = draw_pd(rng, 3);
    const CMatrix c = draw_hermitian(rng, 3);
    const CMatrix a = CMatrix(c * b.inverse() * c) +
                      kPdShift * CMatrix::Identity(3, 3);
    const CMatrix mean = geom_mean(CMatrix((a + a.adjoint()) / 2.0), b);
    CHECK(loewner_leq(c, mean));
    CHECK(loewner_leq(CMatrix(-c), mean));
  }
}

TEST_CASE("weighted_geom_mean: endpoints and commuting midpoint") {
  RngStream rng(127);
  const CMatrix a = draw_pd(rng, 3);
  const CMatrix b = draw_pd(rng, 3);
  CHECK((weighted_geom_mean({a, b, 0.0}) - a).norm() < 1e-9 * (1.0 + a.norm()));
  CHECK((weighted_geom_mean({a, b, 1.0}) - b).norm() < 1e-9 * (1.0 + b.norm()));

  const CMatrix mid = weighted_geom_mean({diag2(1, 4), diag2(9, 1), 0.5});
  CHECK((mid - diag2(3, 2)).norm() < 1e-10);
}

TEST_CASE("weighted_geom_mean: t = 1/4 equals the geodesic quarter point") {
  RngStream rng(131);
  const CMatrix a = draw_pd(rng, 3);
  const CMatrix b = draw_pd(rng, 3);
  const CMatrix quarter = weighted_geom_mean({a, b, 0.25});
  // Midpoint of A and A#B along the geodesic, via the independent oracle.
  const CMatrix half = oracles::riccati_geom_mean(a, b);
  const CMatrix oracle = oracles::riccati_geom_mean(a, half);
  CHECK((quarter - oracle).norm() < 1e-8 * (1.0 + oracle.norm()));
}

TEST_CASE("weighted_geom_mean: midpoint interpolation identity") {
  RngStream rng(137);
  const CMatrix a = draw_pd(rng, 3);
  const CMatrix b = draw_pd(rng, 3);
  const double s = 0.2, t = 0.7;
  const CMatrix lhs = weighted_geom_mean({a, b, (s + t) / 2.0});
  const CMatrix rhs = geom_mean(weighted_geom_mean({a, b, s}),
                                weighted_geom_mean({a, b, t}));
  CHECK((lhs - rhs).norm() < 1e-8 * (1.0 + lhs.norm()));
}

TEST_CASE("weighted_geom_mean: weight range is validated") {
  RngStream rng(139);
  const CMatrix a = draw_pd(rng, 2);
  CHECK_THROWS_AS(weighted_geom_mean({a, a, -0.1}), Error);
  CHECK_THROWS_AS(weighted_geom_mean({a, a, 1.1}), Error);
}

TEST_CASE("gm_block: identity pair") {
  const CMatrix block = gm_block(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2));
  const EigDecomp eig = herm_eig(block);
  CHECK(eig.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(std::abs(eig.eigenvalues(3)) < 1e-12);
  CHECK(is_psd(block).psd);
}

TEST_CASE("gm_block: random PD pair is PSD") {
  RngStream rng(149);
  const CMatrix a = draw_pd(rng, 3);
  const CMatrix b = draw_pd(rng, 3);
  CHECK(is_psd(gm_block(a, b)).psd);
}

TEST_CASE("gm_block: diag(4,1) with diag(1,4)") {
  const CMatrix block = gm_block(diag2(4, 1), diag2(1, 4));
  CHECK((block.block(0, 2, 2, 2) - diag2(2, 2)).norm() < 1e-10);
  const std::vector<double> eigs = oracles::herm_eigenvalues_eigen(block);
  CHECK(eigs.back() >= -1e-10);
}
