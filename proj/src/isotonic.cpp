#include "stepfit/isotonic.hpp"

#include <vector>

#include "stepfit/errors.hpp"

namespace stepfit {

namespace {

struct Pool {
  std::size_t start;
  std::size_t count;
  double sum;
  double mean;
};

// Core PAVA pass; fills `pools` with the pooled blocks of a non-increasing fit.
void pava_pools(std::span<const double> x, std::vector<Pool>& pools) {
  pools.clear();
  for (std::size_t i = 0; i < x.size(); ++i) {
    pools.push_back({i, 1, x[i], x[i]});
    // pool while the previous block sits below the new one
    while (pools.size() >= 2 &&
           pools[pools.size() - 2].mean < pools.back().mean) {
      Pool top = pools.back();
      pools.pop_back();
      Pool& prev = pools.back();
      prev.count += top.count;
      prev.sum += top.sum;
      prev.mean = prev.sum / static_cast<double>(prev.count);
    }
  }
}

}  // namespace

IsotonicFit pava_fit(std::span<const double> x) {
  if (x.empty()) throw EmptyInput("isotonic fit needs at least one value");

  std::vector<Pool> pools;
  pava_pools(x, pools);

  IsotonicFit fit;
  fit.fitted.resize(x.size());
  for (const Pool& pool : pools) {
    for (std::size_t i = 0; i < pool.count; ++i)
      fit.fitted[pool.start + i] = pool.mean;
    // adjacent pools can tie after pooling; keep runs maximal
    if (fit.blocks.empty() || fit.blocks.back().value != pool.mean)
      fit.blocks.push_back({pool.start, pool.mean});
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - fit.fitted[i];
    fit.sse += r * r;
  }
  return fit;
}

std::vector<double> suffix_lb_table(const Dataset& data) {
  const std::size_t m = data.coord_count();
  const std::size_t n = data.size();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = data.x(i);

  std::vector<double> table(m + 1, 0.0);
  std::vector<Pool> pools;
  for (std::size_t v = 0; v < m; ++v) {
    const std::size_t lo = data.coord_begin(v);
    std::span<const double> suffix(xs.data() + lo, n - lo);
    pava_pools(suffix, pools);
    double sse = 0.0;
    for (const Pool& pool : pools) {
      for (std::size_t i = 0; i < pool.count; ++i) {
        const double r = suffix[pool.start + i] - pool.mean;
        sse += r * r;
      }
    }
    table[v] = sse;
  }
  return table;
}

}  // namespace stepfit
