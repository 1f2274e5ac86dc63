#pragma once

#include <cstddef>
#include <vector>

namespace stepfit {

/// Piecewise-constant curve: value values[k] on [breakpoints[k], breakpoints[k+1]),
/// with the last value extended to the right of the final breakpoint.
struct StepCurve {
  std::vector<double> breakpoints;  // strictly increasing, size values.size()+1
  std::vector<double> values;

  std::size_t block_count() const { return values.size(); }

  /// Value at price. Throws BelowDomain if price < breakpoints.front();
  /// prices at or beyond the final breakpoint take the last block's value.
  double evaluate(double price) const;

  /// True when the step values never increase (ties allowed).
  bool non_increasing() const;

  /// Checks the shape invariants (sizes, strict breakpoint order, finiteness).
  void validate() const;
};

}  // namespace stepfit
