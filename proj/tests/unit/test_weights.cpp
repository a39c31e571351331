#include <doctest.h>

#include <algorithm>
#include <random>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/weights.hpp"

using namespace freqlab;

namespace {

const CounterexampleModel& model() {
  static const CounterexampleModel m(12, mpq_class(1, 20), 5, 8);
  return m;
}

const WeightRealization& weights() {
  static const WeightRealization w(model());
  return w;
}

mpz_class dist_to_interval(const mpz_class& n, const mpz_class& lo, const mpz_class& hi) {
  if (n < lo) return lo - n;
  if (n > hi) return n - hi;
  return 0;
}

std::int64_t ramp(std::int64_t h, const mpz_class& d) {
  if (d >= h) return 0;
  return h - d.get_si();
}

// Brute force over every period p up to the bit length of n, using b_p from the
// model, plus the scale and pair plateaus rebuilt from the interval endpoints.
std::int64_t brute_log2_product(const mpz_class& n) {
  const auto& m = model();
  std::int64_t best = 0;
  const std::uint64_t bl = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::uint64_t p = 1; p <= bl + 1; ++p) {
    const mpz_class b = m.b(p);
    mpz_class d;
    if (n < b) {
      d = b - n;
    } else {
      mpz_class r = n % b;
      d = std::min(r, mpz_class(b - r));
    }
    const auto h = static_cast<std::int64_t>(p);
    if (d < 3 * h) best = std::max(best, std::min(h, 3 * h - d.get_si()));
  }
  for (std::uint64_t u = 1; u <= m.umax(); ++u) {
    if (!m.trimmed(u)) continue;
    if (n < m.lo_ceil(u, Mult::eps4) || n > m.hi_floor(u, Mult::eps4)) continue;
    const auto pu = static_cast<std::int64_t>(CounterexampleModel::cell_of(u));
    best = std::max(best, ramp(static_cast<std::int64_t>(u),
                               dist_to_interval(n, m.lo_ceil(u, Mult::eps), m.hi_floor(u, Mult::eps) + pu)));
    for (std::uint64_t v = 1; v < u; ++v) {
      if (!m.trimmed(v)) continue;
      const auto pv = static_cast<std::int64_t>(CounterexampleModel::cell_of(v));
      const mpz_class lo = m.lo_ceil(u, Mult::eps) - m.hi_floor(v, Mult::eps);
      const mpz_class hi = m.hi_floor(u, Mult::eps) - m.lo_ceil(v, Mult::eps) + pu;
      best = std::max(best, ramp(std::max(pu, pv), dist_to_interval(n, lo, hi)));
    }
  }
  return best;
}

// Points around every plateau edge of the scales u <= 3 and around a few multiples of b_p.
std::vector<mpz_class> probe_points() {
  std::vector<mpz_class> pts;
  for (std::uint64_t u = 1; u <= 3; ++u)
    for (const auto& pl : weights().plateaus(u))
      for (long off = -8; off <= 8; ++off) {
        pts.push_back(pl.lo + off);
        pts.push_back(pl.hi + off);
      }
  std::mt19937_64 rng(17);
  for (std::uint64_t p = 1; p <= 20; ++p) {
    const mpz_class b = model().b(p);
    for (int i = 0; i < 5; ++i) {
      const mpz_class k = 1 + rng() % 1000;
      for (long off = -3 * static_cast<long>(p); off <= 3 * static_cast<long>(p); ++off) pts.push_back(k * b + off);
    }
  }
  pts.erase(std::remove_if(pts.begin(), pts.end(), [](const mpz_class& n) { return sgn(n) <= 0; }), pts.end());
  return pts;
}

}  // namespace

TEST_CASE("period layer value against its definition") {
  const mpz_class b = 2711;
  for (std::uint64_t p = 1; p <= 4; ++p)
    for (long n = 1; n < 3 * 2711; ++n) {
      long r = n % 2711;
      long d = n < 2711 ? 2711 - n : std::min(r, 2711 - r);
      const long h = static_cast<long>(p);
      const long expect = d >= 3 * h ? 0 : std::min(h, 3 * h - d);
      REQUIRE(period_layer_value(mpz_class(n), b, p) == expect);
    }
  // Same answer through the big-integer path.
  const mpz_class big_b = pow2(80) + 7;
  for (long off = -20; off <= 20; ++off)
    CHECK(period_layer_value(3 * big_b + off, big_b, 5) ==
          std::max<long>(0, std::min<long>(5, 15 - std::labs(off))));
}

TEST_CASE("plateaus sit where the construction puts them") {
  const auto& m = model();
  const auto& pl2 = weights().plateaus(2);
  REQUIRE(pl2.size() == 1);  // scale 1 is untrimmed, so u = 2 has no pair plateau
  CHECK(pl2[0].lo == m.lo_ceil(2, Mult::eps));
  CHECK(pl2[0].hi == m.hi_floor(2, Mult::eps) + 1);
  CHECK(pl2[0].height == 2);
  const auto& pl3 = weights().plateaus(3);
  REQUIRE(pl3.size() == 2);
  CHECK(pl3[1].v == 2);
  CHECK(pl3[1].height == 3);
  CHECK(weights().plateaus(1).empty());
}

TEST_CASE("realization agrees with a brute-force maximum over all layers") {
  for (const auto& n : probe_points()) REQUIRE(weights().log2_product(n) == brute_log2_product(n));
}

TEST_CASE("consecutive values move by at most one") {
  for (std::uint64_t u = 2; u <= 5; ++u)
    for (const auto& pl : weights().plateaus(u))
      for (const mpz_class& edge : {pl.lo, pl.hi}) {
        std::int64_t prev = weights().log2_product(edge - 12);
        for (long off = -11; off <= 12; ++off) {
          const std::int64_t cur = weights().log2_product(edge + off);
          CHECK(std::llabs(cur - prev) <= 1);
          prev = cur;
        }
      }
}

TEST_CASE("free log2_product matches the realization") {
  const mpz_class n = model().lo_ceil(3, Mult::eps) + 5;
  CHECK(log2_product(model(), n) == weights().log2_product(n));
}

TEST_CASE("evaluation stops below the next unmodelled scale") {
  CHECK_THROWS_AS(weights().eval(model().interval(6, Mult::eps4).lo().ceil()), ResourceError);
  CHECK_THROWS_AS(weights().eval(mpz_class(0)), PreconditionError);
}

TEST_CASE("max-slope lemma and the feasibility suite") {
  CHECK(max_slope_lemma_check(2000, 3).passed);
  const auto r = verify_weight_feasibility(model(), 5, 2000, 3);
  CHECK(r.passed);
  CHECK(r.cases > 2000);
}
