#include "stepfit/oracle.hpp"

#include <limits>

#include "stepfit/cost.hpp"
#include "stepfit/errors.hpp"

namespace stepfit {

OracleResult brute_force(const Dataset& data, const FitConfig& cfg) {
  cfg.validate();
  if (data.size() > 15 || cfg.k > 5) throw InstanceTooLarge();

  const std::size_t m = data.coord_count();
  const std::size_t n = data.size();
  CostTables tables(data);

  const double p_last = data.points().back().p;
  auto arc_ok = [&](std::size_t a, std::size_t b) {
    if (cfg.step_min <= 0.0) return true;
    if (b == m)  // sink arc
      return !cfg.strict_last_block ||
             p_last - data.coord_p(a) >= cfg.step_min;
    return data.coord_p(b) - data.coord_p(a) >= cfg.step_min;
  };

  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();

  // bitmask over interior coordinates 1..m-1 marking chosen breakpoints
  const std::uint32_t interior = m > 0 ? static_cast<std::uint32_t>(m - 1) : 0;
  std::vector<std::size_t> fence;
  std::vector<double> values;
  for (std::uint32_t mask = 0; mask < (1u << interior); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) > cfg.k - 1) continue;

    fence.clear();
    fence.push_back(0);
    for (std::size_t v = 1; v < m; ++v)
      if (mask & (1u << (v - 1))) fence.push_back(v);
    fence.push_back(m);

    bool feasible = true;
    values.clear();
    double cost = 0.0;
    for (std::size_t b = 0; b + 1 < fence.size() && feasible; ++b) {
      if (!arc_ok(fence[b], fence[b + 1])) {
        feasible = false;
        break;
      }
      const std::size_t lo = data.coord_begin(fence[b]);
      const std::size_t hi = fence[b + 1] == m ? n : data.coord_begin(fence[b + 1]);
      const double value = tables.block_value(lo, hi, cfg.model);
      if (cfg.enforce_monotone && !values.empty() && value > values.back())
        feasible = false;
      values.push_back(value);
      cost += tables.block_error(lo, hi, cfg.model);
    }
    if (!feasible || cost >= best.objective) continue;
    best.objective = cost;
    best.boundaries = fence;
    best.values = values;
  }
  if (best.boundaries.empty()) throw InfeasibleStepMin();
  return best;
}

}  // namespace stepfit
