#pragma once

#include <cstddef>
#include <optional>

#include "stepfit/cost.hpp"

namespace stepfit {

/// Fitting options shared by the solver, the bound builders, and the oracle.
struct FitConfig {
  std::size_t k = 1;        ///< maximum number of steps
  double step_min = 0.0;    ///< minimum block length on the p-axis, 0 = off
  CostModel model = CostModel::l2();
  bool enforce_monotone = true;  ///< false = drop the non-increasing constraint

  bool use_isotonic_lb = true;    ///< per-vertex isotonic suffix bound (L2 only)
  bool use_relaxed_lb = false;    ///< cardinality-constrained shortest-path bound
  bool use_clustering_ub = true;  ///< isotonic + adjacency-clustering incumbent

  /// When true, the final block must also span step_min, measured to the last
  /// data coordinate. Default exempts the sink-terminated block.
  bool strict_last_block = false;

  std::optional<double> time_limit_s;

  void validate() const;
};

}  // namespace stepfit
