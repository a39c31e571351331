#include <doctest.h>

#include <random>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/growth_rules.hpp"
#include "freqlab/weighted.hpp"
#include "oracles.hpp"

using namespace freqlab;

namespace {

std::vector<std::uint64_t> nf_oracle(const std::vector<std::uint64_t>& a, std::uint64_t kmax) {
  return oracle::recurrence(kmax, [&](std::uint64_t d) { return oracle::step_function(a, d); });
}

const std::vector<std::uint64_t> kA = {1, 4, 8, 16, 32};

}  // namespace

TEST_CASE("step function f") {
  const GrowthFunction f = growth_from_a(kA);
  for (std::uint64_t j = 1; j <= 32; ++j) CHECK(f(j) == oracle::step_function(kA, j));
  CHECK(f(3) == 1);
  CHECK(f(4) == 2);
  CHECK(f(32) == 5);
  CHECK_THROWS(f(33));
  CHECK_THROWS(growth_from_a({2, 4}));
  CHECK_THROWS(growth_from_a({1, 4, 4}));
  CHECK(f.start_offset() == 1);
  CHECK(identity_a(10).start_offset() == 0);
  CHECK(f.dyadic_sum(1, 2) == mpq_class(1) + mpq_class(1, 8));
}

TEST_CASE("identity a-spec reproduces the plain sequence") {
  const auto plain = build_n(100000);
  CHECK(build_nf(identity_a(64), 100000).terms == plain.terms);
}

TEST_CASE("weighted recurrence matches the oracle in both modes") {
  const auto expect = nf_oracle(kA, 50000);
  const GrowthFunction f = growth_from_a(kA);
  CHECK(build_nf(f, 50000, Exec::serial).terms == expect);
  CHECK(build_nf(f, 50000, Exec::parallel).terms == expect);
}

TEST_CASE("closed forms agree with the recurrence") {
  for (const auto& a : {kA, std::vector<std::uint64_t>{1, 16, 256}, std::vector<std::uint64_t>{1, 2, 3, 5, 9, 17}}) {
    const GrowthFunction f = growth_from_a(a);
    const std::uint64_t K = 1 << 12;
    const auto n = nf_oracle(a, K);
    for (std::uint64_t N = 1; N <= K; ++N) {
      REQUIRE(nf_closed(N, f) == to_mpz(n[N - 1]));
      const Decomposition d = decompose(N, f);
      REQUIRE(d.reassemble() == N);
    }
    for (std::size_t m = 1; m + 1 <= f.size(); ++m)
      for (std::uint64_t q = 0; q < f.a(m + 1) - f.a(m); ++q) {
        const std::uint64_t k = std::uint64_t{1} << (f.a(m) + q);
        if (k > K) break;
        CHECK(nf_at_pow2(m, q, f) == to_mpz(n[k - 1]));
      }
    for (std::uint64_t L = 2; (std::uint64_t{1} << L) - 1 <= K; ++L) {
      if (L + 1 >= f.a_last()) break;
      CHECK(nf_at_pow2_minus1(L, f) == to_mpz(n[(std::uint64_t{1} << L) - 2]));
    }
  }
}

TEST_CASE("closed-form suite under a head-coerced tower") {
  const GrowthFunction f = tower_a(3, 4);
  CHECK(f.spec() == std::vector<std::uint64_t>{1, 16, 256, 65536});
  CHECK(closed_form_check(f, 1 << 14).passed);
}

TEST_CASE("separation property") {
  const GrowthFunction f = growth_from_a(kA);
  const auto seq = build_nf(f, 3000);
  const auto rep = separation_check(seq, f, 3000);
  CHECK(rep.passed);
  // Brute-force the pairwise inequality on a prefix.
  for (std::uint64_t k = 1; k <= 300; ++k)
    for (std::uint64_t l = k + 1; l <= 300; ++l)
      CHECK(seq(l) - seq(k) >= f(oracle::first_zero(k)) + f(oracle::first_zero(l)));

  SpacedSequence broken = seq;
  broken.terms[100] -= 1;
  CHECK_FALSE(separation_check(broken, f, 3000).passed);
}

TEST_CASE("tower sequences") {
  CHECK(tower_a(2, 5).spec() == std::vector<std::uint64_t>{1, 4, 8, 16, 32});
  CHECK_THROWS_AS(tower_a(2, 21), ResourceError);
  CHECK_THROWS_AS(tower_a(3, 5), ResourceError);
  CHECK_THROWS_AS(tower_a(1, 5), DomainError);
}

TEST_CASE("a from h") {
  const auto res = a_from_h(builtin_h("sqrt-log", 2, 1000000), 10);
  // sqrt(log x) >= n first at x = ceil(e^{n^2})
  CHECK(res.a == std::vector<std::uint64_t>{1, 55, 8104});
  CHECK(res.validity.passed);
  CHECK_FALSE(a_from_h(builtin_h("log", 2, 1000000), 10).validity.passed);
}
