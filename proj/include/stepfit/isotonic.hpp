#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stepfit/dataset.hpp"

namespace stepfit {

/// A maximal constant run of an isotonic fit: observations from `start` up to
/// the next run's start all take `value`.
struct IsotonicRun {
  std::size_t start = 0;
  double value = 0.0;
};

/// Least-squares non-increasing fit of a sequence.
struct IsotonicFit {
  std::vector<double> fitted;      // one value per observation, non-increasing
  double sse = 0.0;                // sum of squared residuals
  std::vector<IsotonicRun> blocks; // maximal constant runs
};

/// Pool-adjacent-violators fit (non-increasing direction; negate x at the call
/// site for a non-decreasing fit). Linear time: every element is pooled at
/// most once. Throws EmptyInput.
IsotonicFit pava_fit(std::span<const double> x);

/// Per-vertex lower-bound table: entry v is the isotonic SSE over the
/// observation suffix starting at coordinate v; entry coord_count() is 0.
/// Each entry lower-bounds the L2 cost of any monotone completion from that
/// vertex regardless of the remaining arc budget or last step value.
std::vector<double> suffix_lb_table(const Dataset& data);

}  // namespace stepfit
