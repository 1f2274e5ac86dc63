#include "stepfit/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stepfit/cost.hpp"
#include "stepfit/errors.hpp"
#include "stepfit/isotonic.hpp"

namespace stepfit {

AdjacentPartition adjacency_cluster(std::span<const double> values,
                                    std::size_t max_clusters) {
  if (values.empty()) throw EmptyInput("clustering needs at least one value");
  if (max_clusters < 1) throw InvalidConfig("cluster budget must be >= 1");

  struct Cluster {
    std::size_t start, count;
    double sum;
  };
  std::vector<Cluster> cl;
  cl.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) cl.push_back({i, 1, values[i]});

  // SSE increase of merging adjacent clusters a,b (Ward on the line):
  // n_a*n_b/(n_a+n_b) * (mean_a - mean_b)^2
  auto merge_cost = [&](const Cluster& a, const Cluster& b) {
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double d = a.sum / na - b.sum / nb;
    return na * nb / (na + nb) * d * d;
  };

  while (cl.size() > max_clusters) {
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < cl.size(); ++i) {
      const double c = merge_cost(cl[i], cl[i + 1]);
      if (c < best_cost) {
        best_cost = c;
        best = i;
      }
    }
    cl[best].count += cl[best + 1].count;
    cl[best].sum += cl[best + 1].sum;
    cl.erase(cl.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }

  AdjacentPartition part;
  part.boundaries.reserve(cl.size() + 1);
  part.values.reserve(cl.size());
  for (const Cluster& c : cl) {
    part.boundaries.push_back(c.start);
    part.values.push_back(c.sum / static_cast<double>(c.count));
  }
  part.boundaries.push_back(values.size());
  return part;
}

double sink_breakpoint(const Dataset& data, double step_min) {
  const double last = data.points().back().p;
  const double bumped = std::nextafter(last, std::numeric_limits<double>::infinity());
  return std::max(last + step_min, bumped);
}

namespace {

// Aligns an observation-index fence to coordinate starts (a breakpoint cannot
// split observations that share a price) and collapses empty ranges.
std::vector<std::size_t> snap_fence(const Dataset& data,
                                    const std::vector<std::size_t>& fence) {
  std::vector<std::size_t> snapped;
  snapped.push_back(0);
  for (std::size_t b = 1; b + 1 < fence.size(); ++b) {
    std::size_t obs = fence[b];
    // largest coordinate start <= obs
    std::size_t lo = 0, hi = data.coord_count();
    while (lo + 1 < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (data.coord_begin(mid) <= obs)
        lo = mid;
      else
        hi = mid;
    }
    const std::size_t at = data.coord_begin(lo);
    if (at > snapped.back()) snapped.push_back(at);
  }
  if (snapped.back() != data.size()) snapped.push_back(data.size());
  return snapped;
}

// A boundary inside a constant run of the isotonic fit is meaningless (both
// sides carry one fitted value); keep only boundaries where the fit steps.
std::vector<std::size_t> drop_intra_run(const std::vector<std::size_t>& fence,
                                        const std::vector<double>& fitted) {
  std::vector<std::size_t> kept;
  kept.push_back(0);
  for (std::size_t b = 1; b + 1 < fence.size(); ++b)
    if (fitted[fence[b] - 1] != fitted[fence[b]]) kept.push_back(fence[b]);
  kept.push_back(fitted.size());
  return kept;
}

StepCurve curve_from_fence(const Dataset& data,
                           const std::vector<std::size_t>& fence,
                           const std::vector<double>& fitted, double step_min) {
  StepCurve curve;
  for (std::size_t k = 0; k + 1 < fence.size(); ++k) {
    // a cluster spanning a single run keeps that run's value exactly
    double value = fitted[fence[k]];
    if (fitted[fence[k + 1] - 1] != value) {
      double sum = 0.0;
      for (std::size_t i = fence[k]; i < fence[k + 1]; ++i) sum += fitted[i];
      value = sum / static_cast<double>(fence[k + 1] - fence[k]);
    }
    // adjacent clusters may still tie; merge them into one block
    if (!curve.values.empty() && curve.values.back() == value) continue;
    curve.breakpoints.push_back(data.p(fence[k]));
    curve.values.push_back(value);
  }
  curve.breakpoints.push_back(sink_breakpoint(data, step_min));
  return curve;
}

bool respects_step_min(const Dataset& data, const StepCurve& curve,
                       const FitConfig& cfg) {
  if (cfg.step_min <= 0.0) return true;
  for (std::size_t k = 0; k + 1 < curve.block_count(); ++k)
    if (curve.breakpoints[k + 1] - curve.breakpoints[k] < cfg.step_min)
      return false;
  const double last_start = curve.breakpoints[curve.block_count() - 1];
  if (cfg.strict_last_block &&
      data.points().back().p - last_start < cfg.step_min)
    return false;
  return true;
}

}  // namespace

std::optional<UpperBoundFit> build_upper_bound(const Dataset& data,
                                               const FitConfig& cfg) {
  const IsotonicFit iso = pava_fit([&] {
    std::vector<double> xs(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) xs[i] = data.x(i);
    return xs;
  }());

  for (std::size_t budget = cfg.k; budget >= 1; --budget) {
    const AdjacentPartition part = adjacency_cluster(iso.fitted, budget);
    const auto fence =
        drop_intra_run(snap_fence(data, part.boundaries), iso.fitted);
    StepCurve curve = curve_from_fence(data, fence, iso.fitted, cfg.step_min);
    if (!respects_step_min(data, curve, cfg)) continue;
    UpperBoundFit ub;
    ub.cost = curve_error(data, curve, cfg.model);
    ub.clusters = curve.block_count();
    ub.curve = std::move(curve);
    return ub;
  }
  return std::nullopt;  // only reachable under strict_last_block
}

}  // namespace stepfit
