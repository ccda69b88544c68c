#pragma once

#include <map>
#include <string>
#include <vector>

#include "matrixcs/blocks.hpp"
#include "matrixcs/ensembles.hpp"
#include "matrixcs/lieb.hpp"
#include "matrixcs/means.hpp"
#include "matrixcs/outcome.hpp"

namespace matrixcs {

/// Which parameter axes a check sweeps.
struct CheckAxes {
  bool functional = false;
  bool pair = false;
  bool norm = false;
};

struct RunConfig {
  uint64_t seed = 42;
  int trials = 100;
  std::vector<int> dims = {2, 3};
  double tol_abs = 1e-12;
  double tol_rel = 1e-8;
  std::vector<std::string> checks;      // empty or {"all"}: every check
  std::vector<std::string> functionals; // empty: default family
  std::vector<std::string> pairs;       // empty: default family
  int threads = 0;                      // 0: MATRIXCS_THREADS or hardware
};

struct CheckSummary {
  uint64_t trials = 0;
  uint64_t failures = 0;
  uint64_t inconclusive = 0;
  double min_margin = 0.0;
};

struct Report {
  RunConfig config;
  std::vector<CheckOutcome> outcomes;
  std::map<std::string, CheckSummary> summary;

  bool all_passed() const;
  bool any_inconclusive() const;
};

std::vector<std::string> all_check_ids();
CheckAxes check_axes(const std::string &check_id);

/// Default corpus families.
std::vector<LiebFunctional> default_functionals();
std::vector<FactorPair> default_pairs();

LiebFunctional parse_functional(const std::string &name);
FactorPair parse_pair(const std::string &name);

/// Validates names and ranges; throws Error(InvalidArgument) on bad input.
void validate_config(const RunConfig &config);

Report run_corpus(const RunConfig &config);

/// The fixed 3x3 nilpotent instance: confirms the singular-value lists of
/// |T| + |T^*| and T + T^*, and that |T + T^*| <= |T| + |T^*| fails.
CheckOutcome reproduce_counterexample();

/// The matrix with ones on the superdiagonal.
CMatrix counterexample_matrix();

std::string report_to_json(const Report &report);
std::string report_to_csv(const Report &report);

/// Permanent evaluations inside the corpus stop at this dimension.
inline constexpr int kCorpusPermanentMaxDim = 6;

} // namespace matrixcs
