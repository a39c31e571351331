#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freqlab/check_report.hpp"
#include "freqlab/dyadic.hpp"

namespace freqlab {

// Step function f(j) = m on [a_m, a_{m+1}), from a_1 = 1 < a_2 < ... < a_last.
// Defined on [1, a_last] (f(a_last) = last index is determined by a_last alone).
class GrowthFunction {
 public:
  explicit GrowthFunction(std::vector<std::uint64_t> a, std::string rule = "explicit");

  std::uint64_t operator()(std::uint64_t j) const;
  std::uint64_t a(std::size_t m) const;  // 1-indexed
  std::size_t size() const { return a_.size(); }
  std::uint64_t a_last() const { return a_.back(); }
  const std::vector<std::uint64_t>& spec() const { return a_; }
  const std::string& rule() const { return rule_; }

  // sum_{i=lo}^{hi} 2^{-(a_i - 1)}, exact; empty ranges give 0.
  mpq_class dyadic_sum(std::size_t lo, std::size_t hi) const;
  // Difference between the recurrence (n_1 = 2) and the summation form 2 sum_{i<k} f(delta_i) + f(delta_k).
  std::int64_t start_offset() const;

 private:
  std::vector<std::uint64_t> a_;
  std::string rule_;
};

GrowthFunction growth_from_a(std::vector<std::uint64_t> a);

// n_1(f) = 2, n_k(f) = n_{k-1}(f) + f(delta_{k-1}) + f(delta_k).
SpacedSequence build_nf(const GrowthFunction& f, std::uint64_t kmax, Exec exec = Exec::parallel);

// n_{2^{a_m + q}}(f), 0 <= q < a_{m+1} - a_m, evaluated through both closed forms.
mpz_class nf_at_pow2(std::size_t m, std::uint64_t q, const GrowthFunction& f);

// n_{2^L - 1}(f) for L >= 2 with a_l - 1 <= L < a_{l+1} - 1.
mpz_class nf_at_pow2_minus1(std::uint64_t L, const GrowthFunction& f);

// N = 2^{L0} - 1 + (block sums of the remaining binary digits), grouped by the a-blocks.
struct Decomposition {
  std::uint64_t N = 0;
  std::uint64_t L0 = 0;
  std::size_t l0 = 0;        // a_{l0-1} <= 1 + L0 < a_{l0}
  int tau0 = 0;              // 1 iff L0 = a_{l0-1} - 1
  std::uint64_t q0 = 0;      // 1 + L0 - a_{l0-1}
  bool pure = false;         // N = 2^{L0} - 1, no digits above L0
  std::size_t lN = 0;        // a_{lN} <= wN < a_{lN+1}
  std::uint64_t qN = 0;
  std::uint64_t wN = 0;      // top binary digit (meaningless when pure)
  std::uint64_t X0 = 0;      // digits in [1 + L0, a_{l0} - 1] (capped at wN)
  std::map<std::size_t, std::uint64_t> X;  // j -> digits in [a_j, a_{j+1} - 1], l0 <= j < lN
  std::uint64_t XN = 0;      // digits in [a_{lN}, wN] when lN >= l0

  std::uint64_t reassemble() const;
};

Decomposition decompose(std::uint64_t N, const GrowthFunction& f);

// Full closed form for n_N(f) from the decomposition, in exact rationals.
mpz_class nf_closed(std::uint64_t N, const GrowthFunction& f);

// Exhaustive |n_k - n_l| >= f(delta_k) + f(delta_l) for k != l <= min(kmax, 5000) and the
// adjacent-gap identity up to kmax (which telescopes to the inequality for all pairs).
CheckReport separation_check(const SpacedSequence& seq, const GrowthFunction& f, std::uint64_t kmax,
                             Exec exec = Exec::parallel);

// Recurrence vs nf_closed for all N <= Nmax and reassembly of every decomposition.
CheckReport closed_form_check(const GrowthFunction& f, std::uint64_t Nmax, Exec exec = Exec::parallel);

// a_m = m reproduces the plain sequence.
GrowthFunction identity_a(std::size_t mmax);

}  // namespace freqlab
