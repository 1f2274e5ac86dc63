#pragma once

#include <cstddef>
#include <vector>

#include "stepfit/config.hpp"
#include "stepfit/dataset.hpp"

namespace stepfit {

/// Ground truth from exhaustive enumeration.
struct OracleResult {
  double objective = 0.0;
  std::vector<std::size_t> boundaries;  // coordinate-index fence, 0..coord_count()
  std::vector<double> values;           // per-block representatives
};

/// Enumerates every partition of the coordinates into at most cfg.k contiguous
/// blocks (respecting step_min and, in monotone mode, non-increasing
/// representatives — ties allowed) and returns the cheapest. Guarded to
/// size() <= 15 and k <= 5; throws InstanceTooLarge beyond that.
OracleResult brute_force(const Dataset& data, const FitConfig& cfg);

}  // namespace stepfit
