#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "stepfit/cost.hpp"
#include "stepfit/datagen.hpp"
#include "stepfit/errors.hpp"

using namespace stepfit;
using testutil::close_rel;
using testutil::make_dataset;

TEST_CASE("block_value under the three models") {
  Dataset d = make_dataset({4, 2, 3});
  CostTables t(d);
  CHECK(t.block_value(0, 3, CostModel::l2()) == 3.0);
  CHECK(t.block_value(1, 2, CostModel::l2()) == 2.0);  // single point
  CHECK(t.block_value(1, 2, CostModel::l1()) == 2.0);
  CHECK(t.block_value(1, 2, CostModel::quantile(0.7)) == 2.0);

  Dataset two = make_dataset({1, 9});
  CostTables t2(two);
  CHECK(t2.block_value(0, 2, CostModel::l1()) == 1.0);  // lower median
}

TEST_CASE("block_error under the three models") {
  Dataset d = make_dataset({4, 2, 3});
  CostTables t(d);
  CHECK(t.block_error(0, 3, CostModel::l2()) == 2.0);
  CHECK(t.block_error(0, 1, CostModel::l2()) == 0.0);
  CHECK(t.block_error(2, 3, CostModel::l1()) == 0.0);
  CHECK(t.block_error(1, 2, CostModel::quantile(0.3)) == 0.0);
  // median 3, deviations 1 + 1 + 0
  CHECK(close_rel(t.block_error(0, 3, CostModel::l1()), 2.0));

  CHECK_THROWS_AS(t.block_error(0, 4, CostModel::l2()), IndexOutOfRange);
  CHECK_THROWS_AS(t.block_error(2, 2, CostModel::l2()), IndexOutOfRange);
}

TEST_CASE("prefix-sum block stats match a direct loop") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng() % 60;
    Dataset d = make_dataset(testutil::random_xs(rng, n));
    CostTables t(d);
    for (int q = 0; q < 20; ++q) {
      std::size_t i = rng() % n;
      std::size_t j = i + 1 + rng() % (n - i);
      double sum = 0;
      for (std::size_t h = i; h < j; ++h) sum += d.x(h);
      const double mean = sum / static_cast<double>(j - i);
      double sse = 0;
      for (std::size_t h = i; h < j; ++h)
        sse += (d.x(h) - mean) * (d.x(h) - mean);
      CHECK(close_rel(t.block_value(i, j, CostModel::l2()), mean));
      CHECK(close_rel(t.block_error(i, j, CostModel::l2()), sse));
      CHECK(t.block_error(i, j, CostModel::l2()) >= 0.0);
    }
  }
}

TEST_CASE("L2 block error is superadditive under splitting") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 3 + rng() % 30;
    Dataset d = make_dataset(testutil::random_xs(rng, n));
    CostTables t(d);
    for (int q = 0; q < 20; ++q) {
      std::size_t i = rng() % (n - 2);
      std::size_t j = i + 2 + rng() % (n - i - 2);
      std::size_t h = i + 1 + rng() % (j - i - 1);
      const CostModel l2 = CostModel::l2();
      CHECK(t.block_error(i, j, l2) >=
            t.block_error(i, h, l2) + t.block_error(h, j, l2) - 1e-9);
    }
  }
}

TEST_CASE("median and pinball costs agree with direct evaluation") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 1 + rng() % 25;
    auto xs = testutil::random_xs(rng, n);
    if (rep % 3 == 0)
      for (double& x : xs) x = std::floor(x);  // force ties
    Dataset d = make_dataset(xs);
    CostTables t(d);
    const double tau = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    for (int q = 0; q < 10; ++q) {
      std::size_t i = rng() % n;
      std::size_t j = i + 1 + rng() % (n - i);
      std::vector<double> block(xs.begin() + i, xs.begin() + j);
      std::sort(block.begin(), block.end());
      const std::size_t cnt = block.size();

      const double med = block[(cnt + 1) / 2 - 1];  // lower median
      CHECK(t.block_value(i, j, CostModel::l1()) == med);
      double sad = 0;
      for (double v : block) sad += std::abs(v - med);
      CHECK(close_rel(t.block_error(i, j, CostModel::l1()), sad));

      const auto rank = static_cast<std::size_t>(
          std::ceil(tau * static_cast<double>(cnt)));
      const double quant = block[std::max<std::size_t>(rank, 1) - 1];
      CHECK(t.block_value(i, j, CostModel::quantile(tau)) == quant);
      double pinball = 0;
      for (double v : block)
        pinball += std::max(tau * (v - quant), (tau - 1.0) * (v - quant));
      CHECK(close_rel(t.block_error(i, j, CostModel::quantile(tau)), pinball));

      // Quantile(0.5) representative matches the lower median
      CHECK(t.block_value(i, j, CostModel::quantile(0.5)) ==
            t.block_value(i, j, CostModel::l1()));
    }
  }
}

TEST_CASE("noiseless grid block spanning [12,30) is flat at 115") {
  datagen::GenConfig gen;
  gen.count = 600;
  gen.sigma = 0.0;
  Dataset d = datagen::generate(gen);
  CostTables t(d);
  // p = 0.1*i, so [12, 30) covers observations 120..299
  CHECK(t.block_value(120, 300, CostModel::l2()) == 115.0);
  CHECK(t.block_error(120, 300, CostModel::l2()) == 0.0);
}

TEST_CASE("evaluate walks the reference curve") {
  const StepCurve curve = datagen::true_curve();
  CHECK(curve.evaluate(31.0) == 102.0);
  CHECK(curve.evaluate(30.0) == 102.0);  // left endpoint belongs to the block
  CHECK(curve.evaluate(0.0) == 100.0);
  CHECK(curve.evaluate(45.0) == 72.0);
  CHECK(curve.evaluate(60.0) == 50.0);   // right extension past the last breakpoint
  CHECK(curve.evaluate(1e6) == 50.0);
  CHECK_THROWS_AS(curve.evaluate(-0.001), BelowDomain);
}

TEST_CASE("curve_error matches block sums and handles coverage") {
  Dataset d = make_dataset({4, 2, 3});
  CostTables t(d);

  StepCurve flat;
  flat.breakpoints = {1.0, 4.0};
  flat.values = {3.0};
  CHECK(curve_error(d, flat, CostModel::l2()) ==
        t.block_error(0, 3, CostModel::l2()));

  StepCurve interpolating;
  interpolating.breakpoints = {1.0, 2.0, 3.0, 4.0};
  interpolating.values = {4.0, 2.0, 3.0};
  CHECK(curve_error(d, interpolating, CostModel::l2()) == 0.0);
  CHECK(curve_error(d, interpolating, CostModel::l1()) == 0.0);

  StepCurve short_curve;
  short_curve.breakpoints = {1.5, 4.0};
  short_curve.values = {3.0};
  CHECK_THROWS_AS(curve_error(d, short_curve, CostModel::l2()),
                  CurveDoesNotCoverData);
}

TEST_CASE("true curve scores zero on its own noiseless sample") {
  datagen::GenConfig gen;
  gen.count = 600;
  gen.sigma = 0.0;
  Dataset d = datagen::generate(gen);
  CHECK(curve_error(d, datagen::true_curve(), CostModel::l2()) == 0.0);
}

TEST_CASE("partitions with exact means accrue exactly the block-error sum") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 4 + rng() % 40;
    Dataset d = make_dataset(testutil::random_xs(rng, n));
    CostTables t(d);
    // random fence over 1..n-1
    std::vector<std::size_t> fence{0};
    for (std::size_t v = 1; v < n; ++v)
      if (rng() % 3 == 0) fence.push_back(v);
    fence.push_back(n);

    StepCurve curve;
    double block_sum = 0;
    for (std::size_t b = 0; b + 1 < fence.size(); ++b) {
      curve.breakpoints.push_back(d.p(fence[b]));
      // the identity needs each block to carry its exact mean
      const double av = t.block_value(fence[b], fence[b + 1], CostModel::l2());
      curve.values.push_back(av);
      block_sum += t.block_error(fence[b], fence[b + 1], CostModel::l2());
    }
    curve.breakpoints.push_back(d.p(n - 1) + 1.0);
    CHECK(curve_error(d, curve, CostModel::l2()) == block_sum);  // bit-exact
  }
}
