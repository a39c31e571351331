#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace freqlab {

// The number 2^e with an exact rational exponent e.
class ExpRational {
 public:
  explicit ExpRational(mpq_class exponent);

  const mpq_class& exponent() const { return e_; }
  double log2_approx() const { return e_approx_; }
  double ln_approx() const;

  // sign(n - 2^e). Tries the float bracket first and escalates to the
  // exact integer test n^d <=> 2^c when the bracket is inconclusive.
  int compare(const mpz_class& n) const;
  // Same verdict, always by the exact integer test.
  int compare_exact(const mpz_class& n) const;
  // 0 = conclusive and agrees with exact, 1 = inconclusive, -1 = conclusive but wrong.
  // The last outcome would mean a broken bracket and is what tests look for.
  int bracket_status(const mpz_class& n) const;

  mpz_class floor() const;
  mpz_class ceil() const;

  ExpRational operator*(const ExpRational& o) const { return ExpRational(e_ + o.e_); }
  bool operator<(const ExpRational& o) const { return e_ < o.e_; }
  bool operator==(const ExpRational& o) const { return e_ == o.e_; }

  std::string to_string() const;  // "2^(c/d)"

 private:
  int bracket(const mpz_class& n) const;  // -1, +1, or 0 when inconclusive

  mpq_class e_;
  double e_approx_;
};

enum class Mult { eps = 1, eps2 = 2, eps4 = 4 };

inline int mult_factor(Mult m) { return static_cast<int>(m); }
std::string mult_name(Mult m);

// I_u^{m eps} = [2^{(1 - m eps) a2^u}, 2^{(1 + m eps) a2^u}] where a2 = a^2.
class ExpInterval {
 public:
  ExpInterval(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t u, Mult mult);

  const ExpRational& lo() const { return lo_; }
  const ExpRational& hi() const { return hi_; }
  std::uint64_t u() const { return u_; }
  Mult mult() const { return mult_; }

  bool contains(const mpz_class& n) const {
    return lo_.compare(n) >= 0 && hi_.compare(n) <= 0;
  }

 private:
  ExpRational lo_;
  ExpRational hi_;
  std::uint64_t u_;
  Mult mult_;
};

}  // namespace freqlab
