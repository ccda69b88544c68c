#pragma once

#include <cstdint>
#include <string_view>

#include "matrixcs/types.hpp"

namespace matrixcs {

/// Counter-based splittable stream: the state is derived once from
/// (seed, stream label, trial index) and then advanced by a SplitMix64
/// walk. Streams for different trials are independent of evaluation
/// order, which keeps parallel fan-out deterministic.
class RngStream {
public:
  explicit RngStream(uint64_t state) : state_(state) {}

  static uint64_t mix(uint64_t a, uint64_t b);
  static uint64_t hash_label(std::string_view label);

  /// Derived per-trial stream: mix(seed, label hash, dim, trial).
  static RngStream for_trial(uint64_t seed, std::string_view label, int dim,
                             uint64_t trial);

  uint64_t state() const { return state_; }

  uint64_t next_u64();
  double next_uniform();          // [0, 1)
  double next_gaussian();         // standard normal
  Complex next_complex_gaussian(); // E|z|^2 = 1

private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class EnsembleKind {
  Ginibre,
  Hermitian,
  Psd,
  Pd,
  Unitary,
  Normal,
  Contraction,
};

/// Ginibre entries are complex Gaussians scaled by 1/sqrt(n) so spectra
/// stay O(1) across dimensions.
CMatrix draw_ginibre(RngStream &rng, int n);
CMatrix draw_hermitian(RngStream &rng, int n);
CMatrix draw_psd(RngStream &rng, int n);
/// Wishart plus 1e-3 * I: lambda_min >= 1e-3 by construction.
CMatrix draw_pd(RngStream &rng, int n);
CMatrix draw_unitary(RngStream &rng, int n);
CMatrix draw_normal(RngStream &rng, int n);
CMatrix draw_contraction(RngStream &rng, int n);
CVector draw_unit_vector(RngStream &rng, int n);

CMatrix draw(EnsembleKind kind, RngStream &rng, int n);

inline constexpr double kPdShift = 1e-3;

} // namespace matrixcs
