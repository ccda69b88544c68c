#pragma once

#include <cstdint>
#include <string>

#include "matrixcs/types.hpp"

namespace matrixcs {

/// One inequality trial. margin = rhs - lhs; pass iff
/// margin >= -(tol_abs + tol_rel * max(1, |rhs|)). The stored seed is the
/// derived per-trial stream state, so the inputs can be regenerated
/// bit-for-bit from (check_id, dim, trial, seed).
struct CheckOutcome {
  std::string check_id;
  std::string functional; // empty when the check has no functional axis
  std::string pair;       // empty when the check has no factor-pair axis
  uint64_t trial = 0;
  int dim = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  bool inconclusive = false;
  uint64_t seed = 0;
  std::string note;
};

inline double pass_slack(double rhs, double tol_abs, double tol_rel) {
  return tol_abs + tol_rel * std::max(1.0, std::abs(rhs));
}

} // namespace matrixcs
