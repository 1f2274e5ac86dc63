#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stepfit/config.hpp"
#include "stepfit/curve.hpp"
#include "stepfit/dataset.hpp"

namespace stepfit {

/// Contiguous partition of a sequence: boundaries is the index fence
/// (boundaries.front() == 0, boundaries.back() == n) and values holds each
/// cluster's mean of the member values.
struct AdjacentPartition {
  std::vector<std::size_t> boundaries;
  std::vector<double> values;

  std::size_t cluster_count() const { return values.size(); }
};

/// Bottom-up adjacency-constrained clustering: starting from singletons,
/// repeatedly merge the adjacent pair whose merge least increases the total
/// within-cluster squared error (leftmost pair on ties) until at most
/// max_clusters remain. With a non-increasing input the cluster means come
/// out non-increasing. Throws EmptyInput.
AdjacentPartition adjacency_cluster(std::span<const double> values,
                                    std::size_t max_clusters);

struct UpperBoundFit {
  StepCurve curve;
  double cost = 0.0;
  std::size_t clusters = 0;  // block count actually used
};

/// Feasible incumbent: isotonic fit, clustered down to at most cfg.k blocks,
/// scored against the original data under cfg.model. If step_min rules the
/// K-block curve out, the block budget is decremented until a feasible curve
/// appears; a single block is always feasible unless strict_last_block makes
/// even that impossible (then nullopt).
std::optional<UpperBoundFit> build_upper_bound(const Dataset& data,
                                               const FitConfig& cfg);

/// Dummy closing breakpoint for curves built over this dataset: strictly above
/// the last price by at least step_min.
double sink_breakpoint(const Dataset& data, double step_min);

}  // namespace stepfit
