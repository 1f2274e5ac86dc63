#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "stepfit/dataset.hpp"

namespace testutil {

// dataset at p = 1, 2, ..., n
inline stepfit::Dataset make_dataset(const std::vector<double>& xs) {
  std::vector<stepfit::DataPoint> rows;
  for (std::size_t i = 0; i < xs.size(); ++i)
    rows.push_back({static_cast<double>(i + 1), xs[i]});
  return stepfit::Dataset(std::move(rows), stepfit::DuplicatePolicy::Reject);
}

inline bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<double> random_xs(std::mt19937_64& rng, std::size_t n,
                                     double lo = 0.0, double hi = 10.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> xs(n);
  for (double& x : xs) x = dist(rng);
  return xs;
}

}  // namespace testutil
