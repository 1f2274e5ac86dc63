#include "stepfit/config.hpp"

#include <cmath>

#include "stepfit/errors.hpp"

namespace stepfit {

void FitConfig::validate() const {
  if (k < 1) throw InvalidConfig("k must be at least 1");
  if (!(step_min >= 0.0) || !std::isfinite(step_min))
    throw InvalidConfig("step_min must be a finite non-negative number");
  if (model.kind == CostModel::Kind::Quantile &&
      !(model.tau > 0.0 && model.tau < 1.0))
    throw InvalidConfig("quantile tau must lie in (0,1)");
  if (time_limit_s && !(*time_limit_s > 0.0))
    throw InvalidConfig("time limit must be positive");
}

}  // namespace stepfit
