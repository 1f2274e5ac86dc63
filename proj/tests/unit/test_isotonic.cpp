#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "stepfit/config.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/errors.hpp"
#include "stepfit/isotonic.hpp"
#include "stepfit/oracle.hpp"

using namespace stepfit;
using testutil::close_rel;
using testutil::make_dataset;

TEST_CASE("pava on hand-checked sequences") {
  auto fit = pava_fit(std::vector<double>{5, 4, 1});
  CHECK(fit.fitted == std::vector<double>{5, 4, 1});
  CHECK(fit.sse == 0.0);
  CHECK(fit.blocks.size() == 3);

  fit = pava_fit(std::vector<double>{1, 3, 2});
  CHECK(fit.fitted == std::vector<double>{2, 2, 2});
  CHECK(close_rel(fit.sse, 2.0));
  REQUIRE(fit.blocks.size() == 1);
  CHECK(fit.blocks[0].start == 0);
  CHECK(fit.blocks[0].value == 2.0);

  fit = pava_fit(std::vector<double>{7, 7});
  CHECK(fit.fitted == std::vector<double>{7, 7});
  CHECK(fit.sse == 0.0);
  CHECK(fit.blocks.size() == 1);

  CHECK_THROWS_AS(pava_fit(std::span<const double>{}), EmptyInput);
}

TEST_CASE("pava output is a non-increasing idempotent fit with run means") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rng() % 50;
    const auto xs = testutil::random_xs(rng, n);
    const IsotonicFit fit = pava_fit(xs);

    for (std::size_t i = 1; i < n; ++i) CHECK(fit.fitted[i] <= fit.fitted[i - 1]);

    // each run's value is the mean of the x it covers, and sse decomposes
    double sse = 0.0;
    for (std::size_t b = 0; b < fit.blocks.size(); ++b) {
      const std::size_t lo = fit.blocks[b].start;
      const std::size_t hi =
          b + 1 < fit.blocks.size() ? fit.blocks[b + 1].start : n;
      CHECK(lo < hi);
      double sum = 0.0;
      for (std::size_t i = lo; i < hi; ++i) sum += xs[i];
      CHECK(close_rel(fit.blocks[b].value,
                      sum / static_cast<double>(hi - lo)));
      if (b > 0) CHECK(fit.blocks[b].value < fit.blocks[b - 1].value);
      for (std::size_t i = lo; i < hi; ++i)
        sse += (xs[i] - fit.fitted[i]) * (xs[i] - fit.fitted[i]);
    }
    CHECK(close_rel(fit.sse, sse));

    const IsotonicFit again = pava_fit(fit.fitted);
    CHECK(again.fitted == fit.fitted);
  }
}

TEST_CASE("pava beats random monotone step curves") {
  std::mt19937_64 rng(22);
  for (int rep = 0; rep < 5; ++rep) {
    const std::size_t n = 5 + rng() % 30;
    Dataset d = make_dataset(testutil::random_xs(rng, n));
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = d.x(i);
    const double best = pava_fit(xs).sse;

    for (int c = 0; c < 100; ++c) {
      StepCurve curve;
      double level = 10.0 + 5.0 * (rng() % 100) / 100.0;
      curve.breakpoints.push_back(d.p(0));
      for (std::size_t v = 1; v < n; ++v)
        if (rng() % 4 == 0) {
          curve.values.push_back(level);
          curve.breakpoints.push_back(d.p(v));
          level -= (rng() % 100) / 25.0;
        }
      curve.values.push_back(level);
      curve.breakpoints.push_back(d.p(n - 1) + 1.0);
      CHECK(best <= curve_error(d, curve, CostModel::l2()) + 1e-9);
    }
  }
}

TEST_CASE("suffix table entries equal per-suffix pava errors") {
  Dataset d = make_dataset({1, 3, 2});
  const auto table = suffix_lb_table(d);
  REQUIRE(table.size() == 4);
  CHECK(close_rel(table[0], 2.0));  // pava_fit({1,3,2}).sse
  CHECK(table[2] == 0.0);           // single point
  CHECK(table[3] == 0.0);           // empty suffix
}

TEST_CASE("suffix table lower-bounds optimal monotone K-step suffix fits") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 15; ++rep) {
    const std::size_t n = 3 + rng() % 8;
    const auto xs = testutil::random_xs(rng, n);
    Dataset d = make_dataset(xs);
    const auto table = suffix_lb_table(d);
    for (std::size_t start = 0; start < n; ++start) {
      std::vector<double> tail(xs.begin() + start, xs.end());
      Dataset suffix = make_dataset(tail);
      FitConfig cfg;
      cfg.k = 1 + rng() % 3;
      const OracleResult opt = brute_force(suffix, cfg);
      CHECK(table[start] <= opt.objective + 1e-9);
    }
  }
}
