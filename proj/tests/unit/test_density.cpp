#include <doctest.h>

#include <cmath>
#include <random>

#include "freqlab/density.hpp"
#include "freqlab/dyadic.hpp"
#include "freqlab/errors.hpp"
#include "oracles.hpp"

using namespace freqlab;
using oracle::Big;

TEST_CASE("geometric checkpoints grow by the ratio rule and end at the horizon") {
  for (std::uint64_t h : {1ULL, 2ULL, 60ULL, 1000ULL, 100000ULL}) {
    const auto c = geometric_checkpoints(h);
    CHECK(c.front() == 1);
    CHECK(c.back() == h);
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
      CHECK(c[i] == std::max(c[i - 1] + 1, static_cast<std::uint64_t>(std::ceil(1.05 * c[i - 1]))));
  }
  CHECK_THROWS_AS(geometric_checkpoints(0), DomainError);
}

TEST_CASE("matrix weights") {
  CHECK(parse_matrix("cesaro").log_weight(17) == 0.0);
  CHECK(parse_matrix("log").log_weight(17) == doctest::Approx(-std::log(17.0)));
  CHECK(parse_matrix("A1").log_weight(17) == doctest::Approx(17.0));
  CHECK(parse_matrix("A1/2").log_weight(16) == doctest::Approx(4.0));
  CHECK(parse_matrix("B1").log_weight(100) == doctest::Approx(100.0 / std::log(100.0)));
  CHECK(parse_matrix("B1").k0() == 2);
  CHECK(parse_matrix("Dt2").k0() == 3);
  CHECK(parse_matrix("Dt3").k0() == 16);
  CHECK_THROWS_AS(parse_matrix("Dt5"), DomainError);
  CHECK_THROWS_AS(parse_matrix("A2"), DomainError);
  CHECK_THROWS_AS(parse_matrix("B1/2"), DomainError);
  CHECK(iterated_log(std::exp(std::exp(1.0L)), 2) == doctest::Approx(1.0));
}

TEST_CASE("log cumsum of the logarithmic matrix is ln H_n") {
  const WeightTable t(parse_matrix("log"), 5000);
  Big h = 0;
  for (int k = 1; k <= 5000; ++k) h += Big(1) / k;
  CHECK(t.log_cumsum(5000) == doctest::Approx(static_cast<double>(log(h))).epsilon(1e-13));
}

TEST_CASE("Cesaro density of the evens is 1/2") {
  const auto est = lower_density_estimate(parse_matrix("cesaro"), builtin_set("evens", 100000), 100000);
  CHECK(std::fabs(est.running_min - 0.5) < 1e-3);
  CHECK(est.converged);
}

TEST_CASE("A1 lower density of the evens matches 50-digit summation") {
  const std::uint64_t H = 60;
  const auto est = lower_density_estimate(parse_matrix("A1"), builtin_set("evens", H), H);
  Big best = 1;
  for (const auto& t : est.trace) {
    if (!t.in_window) continue;
    const Big r = oracle::weighted_ratio(
        t.checkpoint, [](std::uint64_t k) { return Big(k); }, [](std::uint64_t k) { return k % 2 == 0; });
    CHECK(t.ratio == doctest::Approx(static_cast<double>(r)).epsilon(1e-12));
    if (r < best) best = r;
  }
  CHECK(est.running_min == doctest::Approx(static_cast<double>(best)).epsilon(1e-12));
  CHECK(std::fabs(est.running_min - 1.0 / (std::exp(1.0) + 1.0)) < 1e-2);
}

TEST_CASE("duality: upper(E) = 1 - lower(complement) on random sets") {
  std::mt19937_64 rng(42);
  const char* mats[] = {"cesaro", "log", "A1", "A1/2", "B1", "Dt2"};
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t H = 2000 + rng() % 20000;
    const double p = 0.1 + 0.8 * static_cast<double>(rng() % 1000) / 1000.0;
    std::vector<std::uint8_t> mask(H);
    for (auto& m : mask) m = static_cast<double>(rng() % 1000000) / 1e6 < p;
    const IntegerSet E = IntegerSet::from_mask(mask, "random");
    const AdmissibleMatrix m = parse_matrix(mats[i % 6]);
    const auto up = upper_density_estimate(m, E, H);
    const auto low_c = lower_density_estimate(m, E.complement(), H);
    CHECK(std::fabs(up.running_max - (1.0 - low_c.running_min)) <= kDualityTolerance);
    CHECK(up.max_duality_defect <= kDualityTolerance);
    REQUIRE(up.trace.size() == low_c.trace.size());
    for (std::size_t j = 0; j < up.trace.size(); ++j)
      CHECK(std::fabs(up.trace[j].ratio + low_c.trace[j].ratio - 1.0) <= kDualityTolerance);
  }
}

TEST_CASE("serial and parallel density traces are identical") {
  const auto E = builtin_set("squares", 200000);
  const auto a = lower_density_estimate(parse_matrix("log"), E, 200000, Exec::serial);
  const auto b = lower_density_estimate(parse_matrix("log"), E, 200000, Exec::parallel);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].ratio == b.trace[i].ratio);
}

TEST_CASE("density bounds: 0 <= lower <= upper <= 1 and monotone in the set") {
  const std::uint64_t H = 5000;
  const auto evens = builtin_set("evens", H);
  const auto all = builtin_set("all", H);
  const auto empty = builtin_set("empty", H);
  for (const char* spec : {"cesaro", "log", "A1/2", "B1"}) {
    const auto m = parse_matrix(spec);
    const auto lo = lower_density_estimate(m, evens, H);
    const auto up = upper_density_estimate(m, evens, H);
    CHECK(lo.running_min >= 0.0);
    CHECK(lo.running_min <= up.running_max);
    CHECK(up.running_max <= 1.0);
    CHECK(lower_density_estimate(m, all, H).running_min == doctest::Approx(1.0));
    CHECK(lower_density_estimate(m, empty, H).running_min == 0.0);
  }
}

TEST_CASE("vanishing ratio: A1 is rejected, slower families pass") {
  CHECK_FALSE(vanishing_ratio_check(parse_matrix("A1"), 100000).passed);
  CHECK(vanishing_ratio_check(parse_matrix("B1"), 100000).passed);
  CHECK(vanishing_ratio_check(parse_matrix("cesaro"), 100000).passed);
  CHECK(vanishing_ratio_check(parse_matrix("A1/2"), 100000).passed);
  CHECK_THROWS_AS(vanishing_ratio_check(parse_matrix("cesaro"), 5), DomainError);
}

TEST_CASE("sequence density") {
  const SpacedSequence n = build_n(20000);
  SUBCASE("Cesaro ratio is k / n_k") {
    const auto est = seq_density_estimate(parse_matrix("cesaro"), n.terms, 20000);
    for (const auto& t : est.trace)
      CHECK(t.ratio == doctest::Approx(static_cast<double>(t.checkpoint) / n(t.checkpoint)).epsilon(1e-12));
  }
  SUBCASE("B1 stays bounded away from 0") {
    const auto est = seq_density_estimate(parse_matrix("B1"), n.terms, 20000);
    CHECK(est.running_min >= 0.01);
  }
  SUBCASE("A1 violates the vanishing hypothesis") {
    CHECK_THROWS_AS(seq_density_estimate(parse_matrix("A1"), n.terms, 1000), PreconditionError);
  }
  SUBCASE("too few terms") {
    CHECK_THROWS_AS(seq_density_estimate(parse_matrix("B1"), n.terms, 30000), PreconditionError);
  }
}

TEST_CASE("family comparison reports every family") {
  const auto j = compare_families(builtin_set("squares", 10000), 10000);
  CHECK(j.is_object());
  CHECK(j.size() >= 3);
}
