#include <doctest.h>

#include <algorithm>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "freqlab/bigint.hpp"
#include "freqlab/dyadic.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/shift_model.hpp"
#include "oracles.hpp"

using namespace freqlab;
using oracle::Big;

namespace {

// Smallest n with n^5 >= 2^57, by scanning.
std::uint64_t ceil_2_pow_57_5() {
  const mpz_class target = pow2(57);
  std::uint64_t n = 1;
  for (;; ++n) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), n, 5);
    if (p >= target) return n;
  }
}

// The three constraints restated over doubles, far from their boundaries only.
int binding_oracle(double a2, double eps) {
  if (!(1 - 4 * eps > 0 && a2 * (1 - 4 * eps) > 1 + 4 * eps)) return 1;
  if (!(a2 * (1 - 2 * eps) - (1 + 2 * eps) >= 1)) return 2;
  if (!(a2 >= 2 + 1 / (2 * eps))) return 3;
  return 0;
}

const CounterexampleModel& model() {
  static const CounterexampleModel m(12, mpq_class(1, 20), 5, 8);
  return m;
}

}  // namespace

TEST_CASE("feasibility names the first violated constraint") {
  CHECK(check_feasibility(12, mpq_class(1, 20)).feasible);
  CHECK(check_feasibility(1, mpq_class(1, 3)).binding == 1);
  CHECK(check_feasibility(2, mpq_class(1, 100)).binding == 2);
  CHECK(check_feasibility(11, mpq_class(1, 20)).binding == 3);
  CHECK(check_feasibility(1, mpq_class(1, 3)).constraint == constraint_text(1));
  CHECK_THROWS_AS(check_feasibility(0, mpq_class(1, 3)), DomainError);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 500; ++i) {
    const long a2 = 1 + static_cast<long>(rng() % 60);
    const long d = 1 + static_cast<long>(rng() % 60);
    CHECK(check_feasibility(a2, mpq_class(1, d)).binding == binding_oracle(static_cast<double>(a2), 1.0 / d));
  }
}

TEST_CASE("find_params is the lexicographically first feasible (d, a2)") {
  const Params p = find_params({});
  CHECK(p.a_sq == 10);
  CHECK(p.eps == mpq_class(1, 5));
  for (long d = 1; d <= 5; ++d)
    for (long a2 = 1; a2 <= 40; ++a2) {
      if (d == 5 && a2 == 10) break;
      CHECK(binding_oracle(static_cast<double>(a2), 1.0 / d) != 0);
    }
  CHECK_THROWS_AS(find_params({4, 40}), SearchError);
  CHECK(default_params().a_sq == 12);
  CHECK(default_params().eps == mpq_class(1, 20));
}

TEST_CASE("exp_diff_at_least on integer and rational exponents") {
  for (long A = 1; A < 40; ++A)
    for (long B = 0; B < A; ++B) {
      const mpz_class diff = pow2(A) - pow2(B);
      const ExpRational ea{mpq_class(A)}, eb{mpq_class(B)};
      CHECK(exp_diff_at_least(ea, eb, diff));
      CHECK_FALSE(exp_diff_at_least(ea, eb, diff + 1));
    }
  std::mt19937_64 rng(8);
  int decided = 0;
  for (int i = 0; i < 300; ++i) {
    // A <= 130 keeps 2^A well inside the 50 digits of the oracle
    const mpq_class A(static_cast<long>(10 + rng() % 120), static_cast<long>(1 + rng() % 7));
    const mpq_class B = A - mpq_class(static_cast<long>(1 + rng() % 100), static_cast<long>(1 + rng() % 9));
    auto big = [](const mpq_class& q) { return Big(q.get_num().get_si()) / q.get_den().get_si(); };
    const Big d = pow(Big(2), big(A)) - pow(Big(2), big(B));
    // floor(d) is reachable, floor(d) + 1 is not
    const mpz_class g = mpz_class(boost::multiprecision::cpp_int(floor(d)).str()) + (i % 2);
    bool inconclusive = true;
    const bool got = exp_diff_at_least(ExpRational(A), ExpRational(B), g, &inconclusive);
    if (A.get_den() == 1 && B.get_den() == 1) CHECK_FALSE(inconclusive);
    if (!inconclusive) {
      CHECK(got == (i % 2 == 0));
      ++decided;
    }
  }
  CHECK(decided >= 295);
}

TEST_CASE("period table: b_p matches the greedy oracle and stays above (8p+1) 2^p") {
  const std::uint64_t c = ceil_2_pow_57_5();
  CHECK(c == 2703);
  mpz_class prev = 0;
  for (std::uint64_t p = 1; p <= 8; ++p) {
    const mpz_class closed = to_mpz((8 * p + 1) << p);
    mpz_class expect = std::max(closed, to_mpz(c + 8 * p));
    expect = std::max(expect, mpz_class(prev + 1));
    CHECK(model().b(p) == expect);
    prev = expect;
  }
  CHECK(model().b(1) == 2711);
  for (std::uint64_t p = 1; p <= 200; p += 7) {
    CHECK(model().b(p) >= to_mpz(8 * p + 1) * pow2(p));
    CHECK(model().window_fits(model().b(p), p));
  }
  CHECK(model().b_exceptions().empty());
  const auto chosen = choose_b(model(), 8);
  CHECK(std::equal(chosen.begin(), chosen.end(), model().b_table().begin()));
}

TEST_CASE("partition cells and trimming") {
  for (std::uint64_t u = 1; u < 300; ++u) CHECK(CounterexampleModel::cell_of(u) == oracle::first_zero(u));
  CHECK(model().u_min(1) == 2);
  CHECK(model().u_min(2) == 5);
  CHECK(model().u_min(3) == 3);
  for (std::uint64_t p = 1; p <= 6; ++p) {
    const auto u = model().u_min(p);
    CHECK(CounterexampleModel::cell_of(u) == p);
    CHECK(u >= p);
    CHECK(model().trimmed(u));
  }
  CHECK_FALSE(model().trimmed(1));
  CHECK(model().cell_scales(1, 5) == std::vector<std::uint64_t>{2, 4});
  CHECK(model().cell_scales(2, 5) == std::vector<std::uint64_t>{5});
  CHECK(CounterexampleModel::max_gap(3) == 8);
}

TEST_CASE("interval axioms") {
  CHECK(verify_interval_axioms(12, mpq_class(1, 20), 5).passed);
  CHECK(verify_interval_axioms(model(), 5).passed);
  CHECK_FALSE(verify_interval_axioms(2, mpq_class(1, 3), 5).passed);
  CHECK_THROWS_AS(CounterexampleModel(1, mpq_class(1, 3)), DomainError);
}

TEST_CASE("membership in E_p") {
  const auto& m = model();
  // Multiples of b_1 inside I_2^eps lie in E_1; the next integer does not.
  const mpz_class b = m.b(1);
  const mpz_class n = (m.lo_ceil(2, Mult::eps) / b + 1) * b;
  CHECK(in_E(m, 1, n));
  CHECK_FALSE(in_E(m, 1, n + 1));
  CHECK(eps_scale_of(m, n) == 2);
  CHECK(eps_scale_of(m, mpz_class(5)) == 0);
  const SymbolicSet E = m.symbolic_E(1);
  REQUIRE(E.components.size() == 2);
  CHECK(E.components[0].period == b);
  CHECK(E.components[0].lo == m.interval(2, Mult::eps).lo());
  CHECK(m.to_json().contains("b"));
}

TEST_CASE("non-FHC bound: exact values and the 6 2^{-p} tail closure") {
  const auto& m = model();
  CHECK(nonfhc_bound(m, 5).value == mpq_class(3, 16));
  for (std::uint64_t p = 1; p <= 10; ++p) {
    mpq_class expect = 0;
    const std::uint64_t Q = std::max<std::uint64_t>(8, p);
    for (std::uint64_t q = p + 1; q <= Q; ++q) expect += mpq_class(to_mpz(8 * q + 1), m.b(q));
    expect += mpq_class(mpz_class(1), pow2(Q));
    expect *= 6;
    expect.canonicalize();
    CHECK(nonfhc_bound(m, p).value == expect);
    CHECK(nonfhc_bound(m, p).value <= mpq_class(mpz_class(6), pow2(p)));
  }
  CHECK_THROWS_AS(nonfhc_bound(m, 0), DomainError);
}

TEST_CASE("vanishing exponents are negative rationals") {
  const auto [e1, e3] = vanish_exponents(12, mpq_class(1, 20));
  CHECK(e1 == mpq_class(-69, 76));
  CHECK(e3 == mpq_class(-7, 8));
  CHECK(vanish_terms_check(model(), 1, 1, 3).passed);
  CHECK(vanish_terms_check(12, mpq_class(1, 20), 2, 1, 3).passed);
  // a2 = 1 makes the first exponent positive
  const auto [f1, f3] = vanish_exponents(1, mpq_class(1, 20));
  CHECK(f1 > 0);
  CHECK_FALSE(vanish_terms_check(1, mpq_class(1, 20), 1, 1, 3).passed);
}
