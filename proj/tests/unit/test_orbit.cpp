#include <doctest.h>

#include <cmath>

#include "freqlab/errors.hpp"
#include "freqlab/orbit.hpp"

using namespace freqlab;

TEST_CASE("rolewicz block vector lands on e_0 after N steps") {
  const std::size_t dim = 16;
  const auto w = weight_preset("rolewicz", dim);
  CHECK(w.size() == dim - 1);
  std::vector<double> x(dim, 0.0);
  x[10] = std::ldexp(1.0, -10);
  const auto r = finite_orbit_sim(w, x, 50, {1.0}, 0.5);
  REQUIRE(r.hits == std::vector<std::uint64_t>{10});
  CHECK(r.distance[9] == 0.0);
  CHECK(r.distance[0] == 1.0);
  CHECK(r.hitting_set().count() == 1);
}

TEST_CASE("direct iteration of a small weighted shift") {
  const std::vector<double> w = {2.0, 0.5, 1.5};
  const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  // after one step: (w1 x1, w2 x2, w3 x3, 0) = (4, 1.5, 6, 0)
  const auto r = finite_orbit_sim(w, x, 4, {}, 0.0);
  CHECK(r.distance[0] == 6.0);
  // after two: (2 * 1.5, 0.5 * 6, 0, 0) = (3, 3, 0, 0)
  CHECK(r.distance[1] == 3.0);
  // then (w1 * 3, 0, 0, 0) and finally 0
  CHECK(r.distance[2] == 6.0);
  CHECK(r.distance[3] == 0.0);
  CHECK(r.hits == std::vector<std::uint64_t>{4});
}

TEST_CASE("zero vector never reaches e_0") {
  const auto r = finite_orbit_sim(weight_preset("rolewicz", 8), std::vector<double>(8, 0.0), 100, {1.0}, 0.5);
  CHECK(r.hits.empty());
  CHECK(r.hitting_set().count() == 0);
}

TEST_CASE("pure shift empties any vector, so the zero ball is hit cofinitely") {
  std::vector<double> x(12, 0.0);
  x[11] = 3.0;
  const auto r = finite_orbit_sim(weight_preset("pure-shift", 12), x, 100, {}, 0.5);
  REQUIRE(r.hits.size() == 89);
  CHECK(r.hits.front() == 12);
  CHECK(r.hits.back() == 100);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(finite_orbit_sim({3.0}, {1.0, 1.0}, 5, {}, 0.5), DomainError);
  CHECK_THROWS_AS(finite_orbit_sim({0.25}, {1.0, 1.0}, 5, {}, 0.5), DomainError);
  CHECK_THROWS_AS(finite_orbit_sim({}, {1.0, 1.0}, 5, {}, 0.5), PreconditionError);
  CHECK_THROWS_AS(finite_orbit_sim({1.0}, {1.0, 1.0}, 0, {}, 0.5), PreconditionError);
  CHECK_THROWS_AS(weight_preset("nope", 4), DomainError);
}

TEST_CASE("A1 gap diagnostic on the squares") {
  const auto sq = builtin_set("squares", 1000);
  const auto r = a1_gap_diagnostic(sq, {10, 100, 1000});
  CHECK(r.passed);
  const auto& rows = r.details["rows"];
  CHECK(rows[2]["max_gap"].get<std::uint64_t>() == 61);  // 961 - 900
  CHECK(rows[2]["a1_lower_estimate"].get<double>() < 1e-3);
  CHECK_THROWS_AS(a1_gap_diagnostic(sq, {100, 10}), PreconditionError);
  CHECK_THROWS_AS(a1_gap_diagnostic(sq, {10, 2000}), CoverageError);
}
