#include <doctest.h>

#include <random>

#include "freqlab/bigint.hpp"
#include "freqlab/dyadic.hpp"
#include "oracles.hpp"

using namespace freqlab;

TEST_CASE("delta is the position of the first zero digit") {
  for (std::uint64_t k = 0; k < 5000; ++k) CHECK(delta(k) == oracle::first_zero(k));
  CHECK(delta(mpz_class("340282366920938463463374607431768211455")) == 129);  // 2^128 - 1
  CHECK(delta(mpz_class(6)) == 1);
  const auto pr = profile(mpz_class(23));  // 10111
  CHECK(pr.delta == 4);
  CHECK(pr.L0 == 3);
}

TEST_CASE("recurrence matches the naive oracle, serial and parallel") {
  const std::uint64_t K = 100000;
  const auto expect = oracle::plain_sequence(K);
  CHECK(build_n(K, Exec::serial).terms == expect);
  CHECK(build_n(K, Exec::parallel).terms == expect);
  CHECK(expect[0] == 2);
  CHECK(expect[1] == 5);
  CHECK(expect[2] == 9);
  CHECK(expect[3] == 13);
}

TEST_CASE("closed form, digit lemma and both power-of-two families") {
  const std::uint64_t K = 1 << 16;
  const auto n = oracle::plain_sequence(K);
  for (std::uint64_t k = 1; k <= K; ++k) {
    REQUIRE(n_closed(k) == n[k - 1]);
    REQUIRE(n_digit_lemma(k) == n[k - 1]);
  }
  for (unsigned m = 1; (1ULL << m) <= K; ++m) {
    CHECK(n[(1ULL << m) - 1] == 4 * (1ULL << m) - 3);
    CHECK(n[(1ULL << m) - 2] == 4 * (1ULL << m) - m - 5);
  }
}

TEST_CASE("big-integer closed form agrees with the 64-bit one") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t k = 1 + rng() % (1ULL << 40);
    CHECK(n_closed(to_mpz(k)) == to_mpz(n_closed(k)));
  }
  CHECK(n_closed(mpz_class(1)) == 2);
}

TEST_CASE("shift decomposition holds at random points") {
  const std::uint64_t K = 1 << 18;
  const auto n = oracle::plain_sequence(K);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t k = 3 + rng() % (K - 3);
    const std::uint64_t p = std::bit_floor(k);
    if (k == p || std::has_single_bit(k + 1)) continue;
    CHECK(n[k - p - 1] == n[k - 1] - n[p - 1] - 1);
  }
}

TEST_CASE("envelope 4k - 2 floor(log2 k) - 1 <= n_k <= 4k - 3 with its tight families") {
  const std::uint64_t K = 1 << 16;
  const auto n = oracle::plain_sequence(K);
  for (std::uint64_t k = 2; k <= K; ++k) {
    const std::uint64_t lg = std::bit_width(k) - 1;
    CHECK(n[k - 1] >= 4 * k - 2 * lg - 1);
    CHECK(n[k - 1] <= 4 * k - 3);
  }
  for (unsigned m = 1; (2ULL << m) - 2 <= K; ++m) {
    const std::uint64_t k = (2ULL << m) - 2;
    CHECK(n[k - 1] == 4 * k - 2 * (std::bit_width(k) - 1) - 1);
  }
  const auto rep = envelope_check_plain(K);
  CHECK(rep.passed);
  CHECK_FALSE(rep.witnesses.empty());
}

TEST_CASE("counting identity agrees with a brute-force count") {
  for (unsigned m = 1; m <= 12; ++m) {
    std::vector<std::uint64_t> cnt(m + 2, 0);
    for (std::uint64_t l = 1; l < (1ULL << m); ++l) ++cnt[oracle::first_zero(l)];
    CHECK(cnt[1] == (1ULL << (m - 1)) - 1);
    for (unsigned j = 2; j <= m; ++j) CHECK(cnt[j] == (1ULL << (m - j)));
    CHECK(cnt[m + 1] == 1);
  }
  CHECK(counting_identity_check(16).passed);
}

TEST_CASE("identity suite passes and reports cases") {
  const auto r = identity_check_plain(1 << 14);
  CHECK(r.passed);
  CHECK(r.cases >= 3 * (1 << 14));
  CHECK(r.to_json()["passed"] == true);
}
