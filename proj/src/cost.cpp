#include "stepfit/cost.hpp"

#include <algorithm>
#include <cmath>

#include "stepfit/errors.hpp"

namespace stepfit {

CostModel CostModel::quantile(double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw InvalidConfig("quantile tau must lie in (0,1)");
  return {Kind::Quantile, tau};
}

void CostTables::check(std::size_t i, std::size_t j) const {
  if (i >= j || j > data_->size()) throw IndexOutOfRange();
}

namespace {

// 1-based rank of the representative order statistic: ceil(tau*n). For
// tau = 0.5 this is the lower median.
std::size_t rep_rank(std::size_t n, double tau) {
  auto k = static_cast<std::size_t>(std::ceil(tau * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace

double CostTables::block_value(std::size_t i, std::size_t j,
                               const CostModel& model) const {
  check(i, j);
  const auto n = j - i;
  switch (model.kind) {
    case CostModel::Kind::L2:
      return (data_->prefix_x(j) - data_->prefix_x(i)) / static_cast<double>(n);
    case CostModel::Kind::L1:
      return data_->order_index().kth_smallest(i, j, rep_rank(n, 0.5));
    case CostModel::Kind::Quantile:
      return data_->order_index().kth_smallest(i, j, rep_rank(n, model.tau));
  }
  throw Error("unreachable");
}

double CostTables::block_error(std::size_t i, std::size_t j,
                               const CostModel& model) const {
  check(i, j);
  const auto n = j - i;
  const double total = data_->prefix_x(j) - data_->prefix_x(i);
  switch (model.kind) {
    case CostModel::Kind::L2: {
      const double sq = data_->prefix_x2(j) - data_->prefix_x2(i);
      const double err = sq - total * total / static_cast<double>(n);
      return err < 0.0 ? 0.0 : err;  // clamp cancellation noise
    }
    case CostModel::Kind::L1: {
      const std::size_t k = rep_rank(n, 0.5);
      const double q = data_->order_index().kth_smallest(i, j, k);
      const double low = data_->order_index().sum_smallest(i, j, k);
      const double dk = static_cast<double>(k);
      const double below = dk * q - low;
      const double above = (total - low) - static_cast<double>(n - k) * q;
      return below + above;
    }
    case CostModel::Kind::Quantile: {
      const std::size_t k = rep_rank(n, model.tau);
      const double q = data_->order_index().kth_smallest(i, j, k);
      const double low = data_->order_index().sum_smallest(i, j, k);
      const double below = static_cast<double>(k) * q - low;
      const double above = (total - low) - static_cast<double>(n - k) * q;
      return model.tau * above + (1.0 - model.tau) * below;
    }
  }
  throw Error("unreachable");
}

double curve_error(const Dataset& data, const StepCurve& curve,
                   const CostModel& model) {
  curve.validate();
  const auto pts = data.points();
  if (curve.breakpoints.front() > pts.front().p ||
      curve.breakpoints.back() < pts.back().p)
    throw CurveDoesNotCoverData();

  CostTables tables(data);
  const OrderStatIndex& order = data.order_index();
  double total = 0.0;
  std::size_t a = 0;
  for (std::size_t k = 0; k < curve.block_count(); ++k) {
    // observations of block k: p in [breakpoints[k], breakpoints[k+1]),
    // with the final block absorbing everything to the right
    std::size_t b = data.size();
    if (k + 1 < curve.block_count()) {
      const auto it = std::lower_bound(
          pts.begin() + static_cast<std::ptrdiff_t>(a), pts.end(),
          curve.breakpoints[k + 1],
          [](const DataPoint& pt, double bp) { return pt.p < bp; });
      b = static_cast<std::size_t>(it - pts.begin());
    }
    if (b == a) continue;
    const double u = curve.values[k];
    const std::size_t n = b - a;
    const double sum = data.prefix_x(b) - data.prefix_x(a);
    switch (model.kind) {
      case CostModel::Kind::L2: {
        const double mean = sum / static_cast<double>(n);
        const double shift = u - mean;
        total += tables.block_error(a, b, model) +
                 static_cast<double>(n) * shift * shift;
        break;
      }
      case CostModel::Kind::L1: {
        const double cnt_le = static_cast<double>(order.count_at_most(a, b, u));
        const double sum_le = order.sum_at_most(a, b, u);
        total += (cnt_le * u - sum_le) +
                 ((sum - sum_le) - (static_cast<double>(n) - cnt_le) * u);
        break;
      }
      case CostModel::Kind::Quantile: {
        const double cnt_le = static_cast<double>(order.count_at_most(a, b, u));
        const double sum_le = order.sum_at_most(a, b, u);
        const double below = cnt_le * u - sum_le;
        const double above = (sum - sum_le) - (static_cast<double>(n) - cnt_le) * u;
        total += model.tau * above + (1.0 - model.tau) * below;
        break;
      }
    }
    a = b;
  }
  return total;
}

}  // namespace stepfit
