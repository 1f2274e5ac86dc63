#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stepfit/order_stat.hpp"

namespace stepfit {

/// One (price, response) observation.
struct DataPoint {
  double p = 0.0;
  double x = 0.0;
};

/// What to do with repeated p-coordinates on load.
enum class DuplicatePolicy {
  Reject,  ///< raise DuplicateP
  Merge,   ///< keep all observations; they share a single breakpoint candidate
};

/// Immutable, p-sorted observation set with the precomputed tables the rest
/// of the library queries: prefix sums of x and x^2, an order-statistic index
/// over x, and the distinct-price coordinate map.
///
/// Observations are indexed 0..size()-1. "Coordinates" are the distinct
/// p values; under the merge policy several observations may share one
/// coordinate and therefore one breakpoint candidate. coord_begin(c) is the
/// first observation of coordinate c, with coord_begin(coord_count())==size().
class Dataset {
 public:
  Dataset(std::vector<DataPoint> rows, DuplicatePolicy policy);

  std::size_t size() const { return pts_.size(); }
  std::span<const DataPoint> points() const { return pts_; }
  double p(std::size_t i) const { return pts_[i].p; }
  double x(std::size_t i) const { return pts_[i].x; }

  /// Sum of x over observations [0, i), 0 <= i <= size().
  double prefix_x(std::size_t i) const { return pref_x_[i]; }
  /// Sum of x^2 over observations [0, i).
  double prefix_x2(std::size_t i) const { return pref_x2_[i]; }

  std::size_t coord_count() const { return coord_begin_.size() - 1; }
  std::size_t coord_begin(std::size_t c) const { return coord_begin_[c]; }
  double coord_p(std::size_t c) const { return pts_[coord_begin_[c]].p; }

  double max_x() const { return max_x_; }

  const OrderStatIndex& order_index() const { return order_; }

 private:
  std::vector<DataPoint> pts_;
  std::vector<double> pref_x_, pref_x2_;
  std::vector<std::size_t> coord_begin_;  // size coord_count()+1, last == size()
  double max_x_ = 0.0;
  OrderStatIndex order_;
};

/// Normalizes raw rows into a Dataset: sorts by p, applies the duplicate
/// policy, validates finiteness. Throws EmptyInput, NonFiniteValue, DuplicateP.
Dataset load_dataset(std::vector<DataPoint> rows, DuplicatePolicy policy);

/// CSV rows "p,x" with '.' decimals, optional single header line (detected by
/// a non-numeric first field), UTF-8 with optional BOM, LF or CRLF endings.
Dataset load_csv(std::istream& in, DuplicatePolicy policy);
Dataset load_csv_file(const std::string& path, DuplicatePolicy policy);

/// Writes the same CSV format (with a "p,x" header, shortest round-trip
/// number formatting).
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace stepfit
