#include "matrixcs/ensembles.hpp"

#include <cmath>

namespace matrixcs {

namespace {

uint64_t splitmix64(uint64_t &state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace

uint64_t RngStream::mix(uint64_t a, uint64_t b) {
  uint64_t s = a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2));
  return splitmix64(s);
}

uint64_t RngStream::hash_label(std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
  for (char ch : label) {
    h ^= static_cast<uint64_t>(static_cast<unsigned char>(ch));
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream RngStream::for_trial(uint64_t seed, std::string_view label, int dim,
                               uint64_t trial) {
  uint64_t s = mix(seed, hash_label(label));
  s = mix(s, static_cast<uint64_t>(dim));
  s = mix(s, trial);
  return RngStream(s);
}

uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  double u2 = next_uniform();
  while (u1 <= 0.0) u1 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

Complex RngStream::next_complex_gaussian() {
  return Complex(next_gaussian(), next_gaussian()) / std::sqrt(2.0);
}

CMatrix draw_ginibre(RngStream &rng, int n) {
  CMatrix g(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = rng.next_complex_gaussian() * scale;
  return g;
}

CMatrix draw_hermitian(RngStream &rng, int n) {
  const CMatrix g = draw_ginibre(rng, n);
  return (g + g.adjoint()) / 2.0;
}

CMatrix draw_psd(RngStream &rng, int n) {
  const CMatrix g = draw_ginibre(rng, n);
  return g.adjoint() * g;
}

CMatrix draw_pd(RngStream &rng, int n) {
  return draw_psd(rng, n) + kPdShift * CMatrix::Identity(n, n);
}

CMatrix draw_unitary(RngStream &rng, int n) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g(i, j) = rng.next_complex_gaussian();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the draw is a well-defined function of the
  // Gaussian sample (Haar via QR with positive diagonal R).
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

CMatrix draw_normal(RngStream &rng, int n) {
  const CMatrix u = draw_unitary(rng, n);
  CVector eigs(n);
  for (int i = 0; i < n; ++i) eigs(i) = rng.next_complex_gaussian();
  return u * eigs.asDiagonal() * u.adjoint();
}

CMatrix draw_contraction(RngStream &rng, int n) {
  const CMatrix g = draw_ginibre(rng, n);
  const double norm = g.operatorNorm();
  return g / (norm + 1.0);
}

CVector draw_unit_vector(RngStream &rng, int n) {
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.next_complex_gaussian();
  const double norm = v.norm();
  if (norm == 0.0) return draw_unit_vector(rng, n);
  return v / norm;
}

CMatrix draw(EnsembleKind kind, RngStream &rng, int n) {
  switch (kind) {
  case EnsembleKind::Ginibre: return draw_ginibre(rng, n);
  case EnsembleKind::Hermitian: return draw_hermitian(rng, n);
  case EnsembleKind::Psd: return draw_psd(rng, n);
  case EnsembleKind::Pd: return draw_pd(rng, n);
  case EnsembleKind::Unitary: return draw_unitary(rng, n);
  case EnsembleKind::Normal: return draw_normal(rng, n);
  case EnsembleKind::Contraction: return draw_contraction(rng, n);
  }
  throw Error(ErrorCode::InvalidArgument, "draw: unknown ensemble kind");
}

} // namespace matrixcs
