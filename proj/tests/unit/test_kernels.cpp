#include <doctest.h>

#include <cstring>
#include <numeric>
#include <random>

#include "freqlab/kernels.hpp"
#include "oracles.hpp"

using namespace freqlab;
using oracle::Big;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

std::vector<double> random_log_weights(std::size_t n, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> lw(n);
  // Drifting upward like the fast-growing families, with noise.
  for (std::size_t i = 0; i < n; ++i) lw[i] = scale * static_cast<double>(i) / static_cast<double>(n) * 1e4 + u(rng);
  return lw;
}

}  // namespace

TEST_CASE("scaled sum matches 50-digit summation across a huge dynamic range") {
  for (double scale : {0.0, 1.0, 10.0}) {
    const auto lw = random_log_weights(5000, scale, 3);
    std::vector<std::uint8_t> mask(lw.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = (i * 7919) % 3 == 0;
    kernels::ScaledSum s;
    for (std::size_t i = 0; i < lw.size(); ++i) s.add(lw[i], mask[i]);
    Big in = 0, all = 0;
    const Big ref = lw.back();
    for (std::size_t i = 0; i < lw.size(); ++i) {
      const Big w = exp(Big(lw[i]) - ref);
      all += w;
      if (mask[i]) in += w;
    }
    const double expect = static_cast<double>(in / all);
    CHECK(s.ratio_in() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(s.log_total() == doctest::Approx(static_cast<double>(log(all) + ref)).epsilon(1e-13));
  }
}

TEST_CASE("merging segments equals one pass") {
  const auto lw = random_log_weights(3000, 1.0, 5);
  kernels::ScaledSum whole, left, right;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    whole.add(lw[i], i % 2 == 0);
    (i < 1700 ? left : right).add(lw[i], i % 2 == 0);
  }
  left.merge(right);
  CHECK(left.ratio_in() == doctest::Approx(whole.ratio_in()).epsilon(1e-14));
  CHECK(left.log_total() == doctest::Approx(whole.log_total()).epsilon(1e-14));
}

TEST_CASE("parallel ratio scan is bit-identical to the serial scan") {
  const std::size_t n = 3 * kernels::kChunk + 123;
  const auto lw = random_log_weights(n, 2.0, 9);
  std::vector<std::uint8_t> mask(n);
  std::mt19937_64 rng(1);
  for (auto& m : mask) m = rng() % 2;
  std::vector<std::uint64_t> cps;
  for (std::uint64_t c = 1; c < n; c = c * 3 / 2 + 1) cps.push_back(c);
  cps.push_back(n);
  const auto a = kernels::ratio_scan(lw, mask, cps, Exec::serial);
  const auto b = kernels::ratio_scan(lw, mask, cps, Exec::parallel);
  REQUIRE(a.size() == cps.size());
  REQUIRE(b.size() == cps.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == cps[i]);
    CHECK(same_bits(a[i].ratio_in, b[i].ratio_in));
    CHECK(same_bits(a[i].log_total, b[i].log_total));
    CHECK(a[i].ratio_in + a[i].ratio_out == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("log prefix agrees between modes and with the oracle") {
  const std::size_t n = 2 * kernels::kChunk + 17;
  const auto lw = random_log_weights(n, 0.5, 13);
  const auto a = kernels::log_prefix(lw, Exec::serial);
  const auto b = kernels::log_prefix(lw, Exec::parallel);
  REQUIRE(a.size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(a[i], b[i]));
  Big all = 0;
  const Big ref = lw.back();
  for (std::size_t i = 0; i < n; ++i) all += exp(Big(lw[i]) - ref);
  CHECK(a.back() == doctest::Approx(static_cast<double>(log(all) + ref)).epsilon(1e-13));
}

TEST_CASE("prefix sum matches std::partial_sum in both modes") {
  std::mt19937_64 rng(2);
  std::vector<std::uint64_t> v(5 * kernels::kChunk + 1);
  for (auto& x : v) x = rng() % 1000;
  std::vector<std::uint64_t> expect(v.size());
  std::partial_sum(v.begin(), v.end(), expect.begin());
  auto s = v, p = v;
  kernels::prefix_sum(s, Exec::serial);
  kernels::prefix_sum(p, Exec::parallel);
  CHECK(s == expect);
  CHECK(p == expect);
}

TEST_CASE("an empty mask counts nothing") {
  const std::vector<double> lw(100, 0.0);
  const std::vector<std::uint64_t> cps = {10, 100};
  const auto r = kernels::ratio_scan(lw, {}, cps, Exec::serial);
  CHECK(r[1].ratio_in == 0.0);
  CHECK(r[1].ratio_out == 1.0);
}
