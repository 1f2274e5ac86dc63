#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "stepfit/clustering.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/errors.hpp"
#include "stepfit/isotonic.hpp"

using namespace stepfit;
using testutil::close_rel;
using testutil::make_dataset;

TEST_CASE("greedy merges pick the cheapest adjacent pair") {
  const std::vector<double> values{4, 4, 2, 2, 1};
  const AdjacentPartition part = adjacency_cluster(values, 2);
  REQUIRE(part.cluster_count() == 2);
  CHECK(part.boundaries == std::vector<std::size_t>{0, 2, 5});
  CHECK(part.values[0] == 4.0);
  CHECK(close_rel(part.values[1], 5.0 / 3.0));
}

TEST_CASE("K=1 collapses to the global mean") {
  const AdjacentPartition part = adjacency_cluster(std::vector<double>{9, 5, 1}, 1);
  REQUIRE(part.cluster_count() == 1);
  CHECK(close_rel(part.values[0], 5.0));
}

TEST_CASE("existing runs survive when the budget allows them") {
  const std::vector<double> values{7, 7, 7, 3, 3, 2};
  const AdjacentPartition part = adjacency_cluster(values, 3);
  REQUIRE(part.cluster_count() == 3);
  CHECK(part.boundaries == std::vector<std::size_t>{0, 3, 5, 6});
  CHECK(part.values == std::vector<double>{7, 3, 2});
  CHECK_THROWS_AS(adjacency_cluster(std::span<const double>{}, 2), EmptyInput);
}

TEST_CASE("cluster means of a non-increasing input stay non-increasing") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + rng() % 40;
    auto xs = testutil::random_xs(rng, n);
    std::sort(xs.begin(), xs.end(), std::greater<>());
    const std::size_t k = 1 + rng() % n;
    const AdjacentPartition part = adjacency_cluster(xs, k);
    CHECK(part.cluster_count() <= k);
    for (std::size_t c = 1; c < part.cluster_count(); ++c)
      CHECK(part.values[c] <= part.values[c - 1]);
  }
}

TEST_CASE("upper bound on a tiny instance") {
  Dataset d = make_dataset({1, 3, 2});
  FitConfig cfg;
  cfg.k = 1;
  const auto ub = build_upper_bound(d, cfg);
  REQUIRE(ub);
  CHECK(ub->curve.block_count() == 1);
  CHECK(ub->curve.values[0] == 2.0);
  CHECK(close_rel(ub->cost, 2.0));
}

TEST_CASE("upper bound equals the isotonic fit when the budget covers its runs") {
  std::mt19937_64 rng(32);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng() % 40;
    Dataset d = make_dataset(testutil::random_xs(rng, n));
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = d.x(i);
    const IsotonicFit iso = pava_fit(xs);

    FitConfig cfg;
    cfg.k = iso.blocks.size() + rng() % 3;
    const auto ub = build_upper_bound(d, cfg);
    REQUIRE(ub);
    CHECK(ub->curve.block_count() == iso.blocks.size());
    CHECK(close_rel(ub->cost, iso.sse));
  }
}

TEST_CASE("upper bound is always feasible") {
  std::mt19937_64 rng(33);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng() % 40;
    Dataset d = make_dataset(testutil::random_xs(rng, n));
    FitConfig cfg;
    cfg.k = 1 + rng() % 6;
    cfg.step_min = (rng() % 3) * 1.5;
    const auto ub = build_upper_bound(d, cfg);
    REQUIRE(ub);
    ub->curve.validate();
    CHECK(ub->curve.non_increasing());
    CHECK(ub->curve.block_count() <= cfg.k);
    for (std::size_t b = 0; b + 1 < ub->curve.block_count(); ++b)
      CHECK(ub->curve.breakpoints[b + 1] - ub->curve.breakpoints[b] >=
            cfg.step_min);
    CHECK(close_rel(ub->cost, curve_error(d, ub->curve, cfg.model)));
  }
}

TEST_CASE("upper bound under merge-duplicate coordinates") {
  Dataset d = load_dataset({{1, 5}, {1, 4}, {2, 3}, {3, 6}, {3, 1}},
                           DuplicatePolicy::Merge);
  FitConfig cfg;
  cfg.k = 2;
  const auto ub = build_upper_bound(d, cfg);
  REQUIRE(ub);
  ub->curve.validate();  // breakpoints must stay strictly increasing
  CHECK(ub->curve.block_count() <= 2);
  CHECK(ub->curve.non_increasing());
}
