#include <doctest.h>

#include <random>

#include "freqlab/bigint.hpp"
#include "freqlab/exp_rational.hpp"

using namespace freqlab;

namespace {

// Largest n with n^d <= 2^c (c >= 0), by bisection on exact powers.
mpz_class floor_root_oracle(unsigned long c, unsigned long d) {
  const mpz_class target = pow2(c);
  mpz_class lo = 1, hi = pow2(c / d + 1);
  while (hi - lo > 1) {
    const mpz_class mid = (lo + hi) / 2;
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), mid.get_mpz_t(), d);
    if (p <= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("floor and ceil of 2^(c/d) match a bisection oracle") {
  CHECK(ExpRational(mpq_class(57, 5)).ceil() == 2703);
  CHECK(ExpRational(mpq_class(57, 5)).floor() == 2702);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const unsigned long d = 1 + rng() % 12;
    const unsigned long c = rng() % 400;
    mpq_class e(c, d);
    e.canonicalize();
    const ExpRational x(e);
    const mpz_class fl = floor_root_oracle(c, d);
    CHECK(x.floor() == fl);
    mpz_class p;
    mpz_pow_ui(p.get_mpz_t(), fl.get_mpz_t(), d);
    const bool exact = p == pow2(c);
    CHECK(x.ceil() == (exact ? fl : fl + 1));
  }
}

TEST_CASE("compare agrees with the exact test, and the float bracket is never wrong") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const unsigned long d = 1 + rng() % 9;
    const unsigned long c = 1 + rng() % 300;
    const ExpRational x(mpq_class(c, d));
    // Probe right around the boundary, where the float bracket is weakest.
    const mpz_class f = x.floor();
    for (long off = -2; off <= 2; ++off) {
      const mpz_class n = f + off;
      if (sgn(n) <= 0) continue;
      CHECK(x.compare(n) == x.compare_exact(n));
      CHECK(x.bracket_status(n) != -1);
    }
  }
}

TEST_CASE("integer exponents are exact powers") {
  for (unsigned long e = 0; e < 200; e += 7) {
    const ExpRational x{mpq_class(e)};
    CHECK(x.floor() == pow2(e));
    CHECK(x.ceil() == pow2(e));
    CHECK(x.compare(pow2(e)) == 0);
    CHECK(x.compare(pow2(e) + 1) == 1);
    CHECK(x.compare(pow2(e) - 1) == -1);
  }
}

TEST_CASE("products add exponents and the text form is exact") {
  const ExpRational a(mpq_class(1, 3)), b(mpq_class(5, 6));
  CHECK((a * b).exponent() == mpq_class(7, 6));
  CHECK(a < b);
  CHECK(ExpRational(mpq_class(57, 5)).to_string() == "2^(57/5)");
}

TEST_CASE("interval endpoints follow (1 -+ m eps) a2^u") {
  const ExpInterval I(12, mpq_class(1, 20), 2, Mult::eps4);
  CHECK(I.lo().exponent() == mpq_class(4, 5) * 144);
  CHECK(I.hi().exponent() == mpq_class(6, 5) * 144);
  CHECK(I.contains(pow2(144)));
  CHECK_FALSE(I.contains(pow2(100)));
  CHECK(mult_factor(Mult::eps2) == 2);
}
