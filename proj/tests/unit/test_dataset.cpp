#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "stepfit/dataset.hpp"
#include "stepfit/errors.hpp"

using namespace stepfit;

TEST_CASE("load_dataset sorts rows by p") {
  Dataset d = load_dataset({{2, 5}, {1, 7}}, DuplicatePolicy::Reject);
  CHECK(d.size() == 2);
  CHECK(d.p(0) == 1);
  CHECK(d.x(0) == 7);
  CHECK(d.p(1) == 2);
  CHECK(d.x(1) == 5);
}

TEST_CASE("load_dataset rejects duplicates under the reject policy") {
  CHECK_THROWS_AS(load_dataset({{1, 7}, {1, 3}}, DuplicatePolicy::Reject),
                  DuplicateP);
}

TEST_CASE("merge policy keeps every observation on one coordinate") {
  Dataset d = load_dataset({{1, 7}, {1, 3}, {2, 5}}, DuplicatePolicy::Merge);
  CHECK(d.size() == 3);
  CHECK(d.coord_count() == 2);
  CHECK(d.coord_begin(0) == 0);
  CHECK(d.coord_begin(1) == 2);
  CHECK(d.coord_begin(2) == 3);
  // block over everything still averages each observation
  CHECK((d.prefix_x(3) - d.prefix_x(0)) / 3.0 == 5.0);
}

TEST_CASE("empty and non-finite input are rejected") {
  CHECK_THROWS_AS(load_dataset({}, DuplicatePolicy::Reject), EmptyInput);
  CHECK_THROWS_AS(
      load_dataset({{1, std::nan("")}}, DuplicatePolicy::Reject),
      NonFiniteValue);
  CHECK_THROWS_AS(load_dataset({{std::numeric_limits<double>::infinity(), 0}},
                               DuplicatePolicy::Reject),
                  NonFiniteValue);
}

TEST_CASE("prefix tables span sums of x and x^2") {
  Dataset d = testutil::make_dataset({4, 2, 3});
  CHECK(d.prefix_x(0) == 0);
  CHECK(d.prefix_x(3) == 9);
  CHECK(d.prefix_x2(3) == 16 + 4 + 9);
  CHECK(d.prefix_x(2) - d.prefix_x(1) == 2);
}

TEST_CASE("csv loader handles headers, CRLF, BOM and blank lines") {
  std::istringstream in("\xEF\xBB\xBFp,x\r\n1.5,2\r\n\r\n2.5,-3e0\n");
  Dataset d = load_csv(in, DuplicatePolicy::Reject);
  REQUIRE(d.size() == 2);
  CHECK(d.p(0) == 1.5);
  CHECK(d.x(0) == 2);
  CHECK(d.p(1) == 2.5);
  CHECK(d.x(1) == -3);
}

TEST_CASE("csv loader takes headerless numeric input") {
  std::istringstream in("1,2\n2,3\n");
  CHECK(load_csv(in, DuplicatePolicy::Reject).size() == 2);
}

TEST_CASE("csv loader reports malformed rows") {
  std::istringstream bad_field("p,x\n1,two\n");
  CHECK_THROWS_AS(load_csv(bad_field, DuplicatePolicy::Reject), ParseError);
  std::istringstream three_fields("1,2,3\n");
  CHECK_THROWS_AS(load_csv(three_fields, DuplicatePolicy::Reject), ParseError);
  std::istringstream nan_value("1,nan\n");
  CHECK_THROWS_AS(load_csv(nan_value, DuplicatePolicy::Reject), NonFiniteValue);
}

TEST_CASE("csv writer round-trips through the loader") {
  Dataset d = load_dataset({{0.1, 2.25}, {7.5, -0.125}, {59.9, 1e-17}},
                           DuplicatePolicy::Reject);
  std::ostringstream out;
  write_csv(out, d);
  std::istringstream in(out.str());
  Dataset back = load_csv(in, DuplicatePolicy::Reject);
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.p(i) == d.p(i));
    CHECK(back.x(i) == d.x(i));
  }
}
