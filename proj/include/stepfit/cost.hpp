#pragma once

#include <cstddef>

#include "stepfit/curve.hpp"
#include "stepfit/dataset.hpp"

namespace stepfit {

/// Loss used to score a block: least squares, least absolute deviations, or
/// the pinball loss of an empirical tau-quantile.
struct CostModel {
  enum class Kind { L2, L1, Quantile };
  Kind kind = Kind::L2;
  double tau = 0.5;  // only meaningful for Quantile

  static CostModel l2() { return {Kind::L2, 0.5}; }
  static CostModel l1() { return {Kind::L1, 0.5}; }
  static CostModel quantile(double tau);

  bool is_l2() const { return kind == Kind::L2; }
};

/// Arc-cost engine over a Dataset. Blocks are half-open observation index
/// ranges [i, j) with 0 <= i < j <= size(); j == size() is the sink side.
///
/// block_value is the block's optimal representative under the model (mean,
/// lower median, or the order statistic at ceil(tau*n)); block_error is the
/// block's loss at that representative. L2 queries are O(1) from prefix sums,
/// L1/quantile are O(log) via the dataset's order-statistic index.
class CostTables {
 public:
  explicit CostTables(const Dataset& data) : data_(&data) {}

  const Dataset& data() const { return *data_; }

  double block_value(std::size_t i, std::size_t j, const CostModel& model) const;
  double block_error(std::size_t i, std::size_t j, const CostModel& model) const;

 private:
  void check(std::size_t i, std::size_t j) const;
  const Dataset* data_;
};

/// Total loss of the curve against the data. The curve must cover
/// [p_min, p_max]; the final block right-extends past its closing breakpoint.
/// For L2 the per-block term is block_error + n*(u - mean)^2, so a curve whose
/// values are the blocks' exact means accrues exactly the sum of block errors.
double curve_error(const Dataset& data, const StepCurve& curve,
                   const CostModel& model);

}  // namespace stepfit
