#include "stepfit/curve.hpp"

#include <algorithm>
#include <cmath>

#include "stepfit/errors.hpp"

namespace stepfit {

double StepCurve::evaluate(double price) const {
  if (breakpoints.empty() || values.empty()) throw EmptyInput("empty curve");
  if (price < breakpoints.front()) throw BelowDomain();
  // last breakpoint is the (right-open) end of the final block; extend beyond it
  if (price >= breakpoints.back()) return values.back();
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), price);
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

bool StepCurve::non_increasing() const {
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[k - 1]) return false;
  return true;
}

void StepCurve::validate() const {
  if (values.empty()) throw EmptyInput("curve has no blocks");
  if (breakpoints.size() != values.size() + 1)
    throw Error("curve needs one more breakpoint than values");
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (!std::isfinite(breakpoints[k])) throw NonFiniteValue();
    if (k > 0 && !(breakpoints[k - 1] < breakpoints[k]))
      throw Error("breakpoints must be strictly increasing");
  }
  for (double v : values)
    if (!std::isfinite(v)) throw NonFiniteValue();
}

}  // namespace stepfit
