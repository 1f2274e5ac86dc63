#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "stepfit/config.hpp"
#include "stepfit/curve.hpp"
#include "stepfit/dataset.hpp"

namespace stepfit {

enum class SolveStatus { Optimal, TimeLimit };

/// DP state of a partial path: accumulated error, arcs used, and the step
/// value of the last block.
struct Label {
  double cost = 0.0;
  int arcs = 0;
  double step_value = 0.0;
};

/// True iff `a` is no worse than `b` in every component with at least one
/// strict inequality (cost and arcs lower-or-equal, step value
/// greater-or-equal). With compare_step_value = false the third component is
/// ignored, which is the relaxed-mode rule.
bool dominates(const Label& a, const Label& b, bool compare_step_value = true);

/// (ub - lb) / lb * 100. Throws NonPositiveLB when lb <= 0.
double gap_percent(double ub, double lb);

/// Backward table over (remaining arcs r, vertex v): minimum total block error
/// of a path from v to the sink using at most r arcs, monotonicity ignored,
/// arcs violating step_min removed. table[r][v]; table[r][sink] == 0;
/// table[0][v] is +inf for v != sink. Size (k+1) x (coord_count()+1).
std::vector<std::vector<double>> cardinality_sp_lb(const Dataset& data,
                                                   std::size_t k,
                                                   double step_min,
                                                   const CostModel& model,
                                                   bool strict_last_block);

struct BoundsReport {
  std::optional<double> ub0;           ///< initial incumbent, if any
  double lb0 = 0.0;                    ///< initial global lower bound
  std::optional<double> gap0_percent;  ///< defined when ub0 set and lb0 > 0
  double best_lb_final = 0.0;          ///< best certified lower bound at exit
  SolveStatus status = SolveStatus::Optimal;
};

struct SearchCounters {
  std::uint64_t labels_created = 0;    ///< labels accepted into a layer store
  std::uint64_t labels_dominated = 0;  ///< rejected newcomers + deleted storees
  std::uint64_t labels_pruned = 0;     ///< bound-test rejections + layer clears
};

struct FitResult {
  StepCurve curve;
  double objective = 0.0;
  BoundsReport bounds;
  SearchCounters counters;
  double wall_time_s = 0.0;
};

/// Exact label-setting solve.
///
/// Monotone mode returns the global optimum over non-increasing step curves
/// with at most cfg.k blocks (and step_min respected). Relaxed mode
/// (enforce_monotone = false) drops the monotonicity resource and returns the
/// exact optimum of the relaxed problem, which lower-bounds the monotone one;
/// if its curve happens to be non-increasing it is optimal for the monotone
/// problem as well. On time_limit expiry the incumbent curve is returned with
/// status TimeLimit and an anytime lower-bound certificate in
/// bounds.best_lb_final. Throws InfeasibleStepMin when strict_last_block
/// excludes every completion.
FitResult solve(const Dataset& data, const FitConfig& cfg);

/// Two-phase driver: run the relaxed search first (isotonic bounds engaged);
/// if its curve is non-increasing it is certified optimal and returned.
/// Otherwise rerun the monotone search seeded with the tighter of the
/// clustering incumbent and a monotone repair of the relaxed curve, with the
/// relaxed objective as the reported initial lower bound.
FitResult try_relaxed_first(const Dataset& data, const FitConfig& cfg);

}  // namespace stepfit
