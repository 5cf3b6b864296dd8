#include <doctest.h>

#include "contention/grid.hpp"

using contention::grid::GridError;
using contention::grid::parse_doubles;
using contention::grid::parse_ints;

TEST_CASE("comma lists") {
  CHECK(parse_doubles("2,4,8") == std::vector<double>{2, 4, 8});
  CHECK(parse_ints("5,10,20") == std::vector<int>{5, 10, 20});
  CHECK(parse_doubles("0.5") == std::vector<double>{0.5});
}

TEST_CASE("ranges are generated by index, endpoints inclusive") {
  const auto grid = parse_doubles("0.01:0.99:0.01");
  REQUIRE(grid.size() == 99);
  CHECK(grid.front() == 0.01);
  // index-based generation: point i is start + i*step, no accumulated drift
  CHECK(grid[49] == 0.01 + 49 * 0.01);
  CHECK(grid.back() == doctest::Approx(0.99).epsilon(1e-12));

  const auto ints = parse_ints("2:50");
  REQUIRE(ints.size() == 49);
  CHECK(ints.front() == 2);
  CHECK(ints.back() == 50);
}

TEST_CASE("mixed lists and ranges") {
  CHECK(parse_ints("1,3:5,9") == std::vector<int>{1, 3, 4, 5, 9});
}

TEST_CASE("malformed grids") {
  CHECK_THROWS_AS(parse_doubles(""), GridError);
  CHECK_THROWS_AS(parse_doubles("a,b"), GridError);
  CHECK_THROWS_AS(parse_doubles("1:2:0"), GridError);
  CHECK_THROWS_AS(parse_doubles("5:1"), GridError);
  CHECK_THROWS_AS(parse_doubles("1:2:3:4"), GridError);
  CHECK_THROWS_AS(parse_ints("1.5"), GridError);
  CHECK_THROWS_AS(parse_doubles("1,"), GridError);
}
