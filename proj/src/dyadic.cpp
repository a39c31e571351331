#include "freqlab/dyadic.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

std::uint64_t floor_log2(std::uint64_t k) { return 63 - static_cast<std::uint64_t>(std::countl_zero(k)); }

// Smallest index in [lo, hi] failing `ok`, or hi + 1.
template <class Pred>
std::uint64_t first_failure(std::uint64_t lo, std::uint64_t hi, Exec exec, Pred ok) {
  std::uint64_t worst = hi + 1;
  if (exec == Exec::serial) {
    for (std::uint64_t k = lo; k <= hi; ++k)
      if (!ok(k)) return k;
    return worst;
  }
  const auto n = static_cast<std::int64_t>(hi);
#pragma omp parallel for schedule(static) reduction(min : worst)
  for (std::int64_t k = static_cast<std::int64_t>(lo); k <= n; ++k)
    if (!ok(static_cast<std::uint64_t>(k))) worst = std::min(worst, static_cast<std::uint64_t>(k));
  return worst;
}

}  // namespace

std::uint64_t delta(const mpz_class& k) {
  if (sgn(k) <= 0) throw DomainError("delta needs k >= 1");
  return mpz_scan0(k.get_mpz_t(), 0) + 1;
}

DyadicProfile profile(const mpz_class& k) {
  const auto d = delta(k);
  return {k, d, d - 1};
}

SpacedSequence build_n(std::uint64_t kmax, Exec exec) {
  if (kmax == 0) throw DomainError("build_n needs kmax >= 1");
  SpacedSequence s;
  s.terms.resize(kmax);
  s.terms[0] = 2;
  const auto n = static_cast<std::int64_t>(kmax);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t k = 2; k <= n; ++k) {
    const auto u = static_cast<std::uint64_t>(k);
    s.terms[u - 1] = delta(u - 1) + delta(u);
  }
  kernels::prefix_sum(s.terms, exec);
  return s;
}

std::uint64_t n_closed(std::uint64_t k) {
  if (k == 0) throw DomainError("n_closed needs k >= 1");
  if (k >= 2 && std::has_single_bit(k)) return 4 * k - 3;
  if (std::has_single_bit(k + 1)) {
    const std::uint64_t m = floor_log2(k + 1);
    return 4 * (k + 1) - m - 5;
  }
  const std::uint64_t L0 = delta(k) - 1;
  const std::uint64_t digits = static_cast<std::uint64_t>(std::popcount(k)) - L0;
  return 4 * k - 2 * digits - L0 - 1;
}

mpz_class n_closed(const mpz_class& k) {
  if (sgn(k) <= 0) throw DomainError("n_closed needs k >= 1");
  if (k >= 2 && mpz_popcount(k.get_mpz_t()) == 1) return 4 * k - 3;
  const mpz_class k1 = k + 1;
  if (mpz_popcount(k1.get_mpz_t()) == 1) {
    const auto m = mpz_sizeinbase(k1.get_mpz_t(), 2) - 1;
    return 4 * k1 - mpz_class(m) - 5;
  }
  const auto L0 = delta(k) - 1;
  const auto digits = mpz_popcount(k.get_mpz_t()) - L0;
  return 4 * k - 2 * mpz_class(digits) - mpz_class(L0) - 1;
}

std::uint64_t n_digit_lemma(std::uint64_t k) {
  if (k == 0) throw DomainError("n_digit_lemma needs k >= 1");
  const std::uint64_t L0 = delta(k) - 1;
  // n_{2^i} = 4 2^i - 3 and n_{2^L - 1} = 4 2^L - L - 5 (n_0 = -1)
  std::int64_t total = L0 == 0 ? -1 : static_cast<std::int64_t>((std::uint64_t{4} << L0) - L0 - 5);
  for (std::uint64_t rest = k >> (L0 + 1), i = L0 + 1; rest != 0; rest >>= 1, ++i)
    if (rest & 1) total += static_cast<std::int64_t>((std::uint64_t{4} << i) - 3 + 1);
  return static_cast<std::uint64_t>(total);
}

CheckReport identity_check_plain(std::uint64_t kmax, Exec exec) {
  CheckReport rep;
  rep.name = "plain identities";
  rep.identity =
      "n_1 = 2, n_k = n_{k-1} + delta_{k-1} + delta_k equals n_k = 4k - 2 sum alpha_i - L0 - 1; "
      "n_{2^m} = 4 2^m - 3; n_{2^m - 1} = 4 2^m - m - 5; digit lemma; n_{k-2^n} = n_k - n_{2^n} - 1";
  if (kmax < 1) throw DomainError("kmax must be >= 1");
  const auto seq = build_n(kmax, exec);
  const auto& t = seq.terms;

  auto record = [&](const char* what, std::uint64_t bad) {
    if (bad <= kmax) {
      std::ostringstream os;
      os << what << " fails at k=" << bad;
      rep.fail(os.str());
    }
  };
  record("closed form", first_failure(1, kmax, exec, [&](std::uint64_t k) { return n_closed(k) == t[k - 1]; }));
  record("digit lemma", first_failure(1, kmax, exec, [&](std::uint64_t k) { return n_digit_lemma(k) == t[k - 1]; }));
  record("shift decomposition", first_failure(3, kmax, exec, [&](std::uint64_t k) {
           const std::uint64_t p = std::bit_floor(k);
           if (k == p || std::has_single_bit(k + 1)) return true;
           return t[k - p - 1] == t[k - 1] - t[p - 1] - 1;
         }));
  rep.cases = 3 * kmax;

  std::uint64_t m = 0;
  for (; (std::uint64_t{1} << m) <= kmax && m < 63; ++m) {
    const std::uint64_t p = std::uint64_t{1} << m;
    if (m >= 1 && t[p - 1] != 4 * p - 3) rep.fail("n_{2^" + std::to_string(m) + "} != 4 2^m - 3");
    if (m >= 1 && t[p - 2] != 4 * p - m - 5) rep.fail("n_{2^" + std::to_string(m) + " - 1} != 4 2^m - m - 5");
    rep.cases += 2;
  }
  rep.details["kmax"] = kmax;
  rep.details["power_family_mmax"] = m == 0 ? 0 : m - 1;
  return rep;
}

CheckReport envelope_check_plain(std::uint64_t kmax, Exec exec) {
  if (kmax < 2) throw DomainError("envelope_check_plain needs kmax >= 2");
  CheckReport rep;
  rep.name = "plain envelope";
  rep.identity = "4k - 2 floor(log2 k) - 1 <= n_k <= 4k - 3";
  const auto seq = build_n(kmax, exec);
  const auto& t = seq.terms;
  auto lower = [](std::uint64_t k) { return 4 * k - 2 * floor_log2(k) - 1; };
  auto upper = [](std::uint64_t k) { return 4 * k - 3; };

  const auto bad = first_failure(2, kmax, exec, [&](std::uint64_t k) {
    return lower(k) <= t[k - 1] && t[k - 1] <= upper(k);
  });
  if (bad <= kmax) rep.fail("envelope violated at k=" + std::to_string(bad));
  rep.cases = kmax - 1;

  std::vector<std::uint64_t> up_tight, lo_tight;
  for (std::uint64_t k = 2; k <= kmax; ++k) {
    if (t[k - 1] == upper(k)) up_tight.push_back(k);
    if (t[k - 1] == lower(k)) lo_tight.push_back(k);
  }
  // documented families: upper at 2^n, lower at 2^{m+1} - 2
  std::vector<std::uint64_t> up_extra, lo_extra;
  for (auto k : up_tight)
    if (!std::has_single_bit(k)) up_extra.push_back(k);
  for (auto k : lo_tight)
    if (!std::has_single_bit(k + 2)) lo_extra.push_back(k);
  for (std::uint64_t p = 2; p <= kmax; p <<= 1) {
    if (t[p - 1] != upper(p)) rep.fail("upper bound not tight at 2^n = " + std::to_string(p));
    if (2 * p - 2 <= kmax && t[2 * p - 3] != lower(2 * p - 2))
      rep.fail("lower bound not tight at 2^{m+1} - 2 = " + std::to_string(2 * p - 2));
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(up_tight.size(), 24); ++i)
    rep.witness("upper tight k=" + std::to_string(up_tight[i]));
  for (std::size_t i = 0; i < std::min<std::size_t>(lo_tight.size(), 24); ++i)
    rep.witness("lower tight k=" + std::to_string(lo_tight[i]));
  rep.details["upper_tight_count"] = up_tight.size();
  rep.details["lower_tight_count"] = lo_tight.size();
  rep.details["upper_tight_outside_family"] = up_extra;
  rep.details["lower_tight_outside_family"] = lo_extra;
  return rep;
}

CheckReport counting_identity_check(unsigned mmax) {
  CheckReport rep;
  rep.name = "dyadic counting identity";
  rep.identity = "#{1 <= l <= 2^m - 1 : delta_l = j} = 2^{m-1} - 1 (j=1), 2^{m-j} (2<=j<=m), 1 (j=m+1), 0 above";
  if (mmax > 40) throw ResourceError("counting identity is exhaustive; mmax <= 40");
  for (unsigned m = 1; m <= mmax; ++m) {
    std::vector<std::uint64_t> count(m + 3, 0);
    const std::uint64_t top = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t l = 1; l <= top; ++l) {
      const auto d = delta(l);
      ++count[std::min<std::uint64_t>(d, m + 2)];
    }
    for (unsigned j = 1; j <= m + 2; ++j) {
      std::uint64_t expect = 0;
      if (j == 1)
        expect = (std::uint64_t{1} << (m - 1)) - 1;
      else if (j <= m)
        expect = std::uint64_t{1} << (m - j);
      else if (j == m + 1)
        expect = 1;
      ++rep.cases;
      if (count[j] != expect)
        rep.fail("m=" + std::to_string(m) + " j=" + std::to_string(j) + ": " + std::to_string(count[j]) +
                 " != " + std::to_string(expect));
    }
  }
  rep.details["mmax"] = mmax;
  return rep;
}

}  // namespace freqlab
