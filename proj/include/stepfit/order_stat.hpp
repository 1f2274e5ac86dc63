#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stepfit {

/// Order-statistic index over a fixed sequence of doubles.
///
/// Supports, for any contiguous position range [lo, hi):
///   - the k-th smallest value (k is 1-based),
///   - the sum of the k smallest values,
///   - count and sum of the elements strictly below / at most a threshold.
/// All queries run in O(log V) where V is the number of distinct values.
///
/// Internally a rank-space wavelet tree: level d stably partitions every
/// node's positions by "rank < mid"; prefix tables of left-going counts and
/// left-going value sums drive the descent.
class OrderStatIndex {
 public:
  OrderStatIndex() = default;
  explicit OrderStatIndex(std::span<const double> values);

  std::size_t size() const { return n_; }

  /// k-th smallest value among positions [lo, hi), 1 <= k <= hi - lo.
  double kth_smallest(std::size_t lo, std::size_t hi, std::size_t k) const;

  /// Sum of the k smallest values among positions [lo, hi).
  double sum_smallest(std::size_t lo, std::size_t hi, std::size_t k) const;

  /// Number of elements in [lo, hi) strictly less than v, and their sum.
  std::size_t count_below(std::size_t lo, std::size_t hi, double v) const;
  double sum_below(std::size_t lo, std::size_t hi, double v) const;

  /// Same with <= v.
  std::size_t count_at_most(std::size_t lo, std::size_t hi, double v) const;
  double sum_at_most(std::size_t lo, std::size_t hi, double v) const;

 private:
  struct Pick {
    double value;
    double sum;  // sum of the k smallest
  };
  Pick select(std::size_t lo, std::size_t hi, std::size_t k) const;
  // count/sum of elements whose rank is < rank_limit
  std::pair<std::size_t, double> below_rank(std::size_t lo, std::size_t hi,
                                            std::size_t rank_limit) const;
  void check_range(std::size_t lo, std::size_t hi) const;

  std::size_t n_ = 0;
  std::vector<double> distinct_;             // sorted distinct values
  // per level: prefix counts/sums of elements routed to the left child
  std::vector<std::vector<std::uint32_t>> left_cnt_;
  std::vector<std::vector<double>> left_sum_;
};

}  // namespace stepfit
