#pragma once

#include <gmpxx.h>

#include <bit>
#include <cstdint>
#include <vector>

#include "freqlab/check_report.hpp"
#include "freqlab/kernels.hpp"

namespace freqlab {

// Position (1-indexed from the least significant bit) of the first zero digit.
inline std::uint64_t delta(std::uint64_t k) { return static_cast<std::uint64_t>(std::countr_one(k)) + 1; }
std::uint64_t delta(const mpz_class& k);

struct DyadicProfile {
  mpz_class k;
  std::uint64_t delta = 0;
  std::uint64_t L0 = 0;  // number of trailing ones, delta - 1
};

DyadicProfile profile(const mpz_class& k);

struct SpacedSequence {
  enum class Generator { plain, weighted };
  Generator generator = Generator::plain;
  std::vector<std::uint64_t> terms;  // terms[k-1] = n_k

  std::uint64_t operator()(std::uint64_t k) const { return terms.at(k - 1); }
  std::uint64_t size() const { return terms.size(); }
};

// n_1 = 2, n_k = n_{k-1} + delta_{k-1} + delta_k.
SpacedSequence build_n(std::uint64_t kmax, Exec exec = Exec::parallel);

// Closed form: 4 2^m - 3 at k = 2^m, 4 2^m - m - 5 at k = 2^m - 1,
// otherwise 4k - 2 sum_{i > L0} alpha_i - L0 - 1 over the binary digits alpha_i of k.
std::uint64_t n_closed(std::uint64_t k);
mpz_class n_closed(const mpz_class& k);

// n_k = sum_{i > L0} alpha_i (n_{2^i} + 1) + n_{2^{L0} - 1}, with n_0 = -1.
std::uint64_t n_digit_lemma(std::uint64_t k);

// Recurrence vs closed form, the two power-of-two families, the digit lemma and
// n_{k - 2^n} = n_k - n_{2^n} - 1 for 2^n < k < 2^{n+1} - 1.
CheckReport identity_check_plain(std::uint64_t kmax, Exec exec = Exec::parallel);

// 4k - 2 floor(log2 k) - 1 <= n_k <= 4k - 3 for 2 <= k <= kmax, with tight witnesses.
CheckReport envelope_check_plain(std::uint64_t kmax, Exec exec = Exec::parallel);

// #{1 <= l <= 2^m - 1 : delta_l = j}: 2^{m-1} - 1 (j = 1), 2^{m-j} (2 <= j <= m), 1 (j = m+1).
CheckReport counting_identity_check(unsigned mmax);

}  // namespace freqlab
