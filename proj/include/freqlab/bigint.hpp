#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>

namespace freqlab {

inline mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

inline bool fits_u64(const mpz_class& z) {
  return sgn(z) >= 0 && mpz_sizeinbase(z.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const mpz_class& z) {
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, z.get_mpz_t());
  return v;
}

inline mpz_class pow2(unsigned long e) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, e);
  return z;
}

// log2 of a positive integer, accurate to a few ulps even for huge z.
inline double log2_mpz(const mpz_class& z) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return static_cast<double>(e) + std::log2(m);
}

inline double ln_mpz(const mpz_class& z) { return log2_mpz(z) * 0.69314718055994530942; }

inline std::string to_string(const mpz_class& z) { return z.get_str(10); }

// Rationals serialize as "c/d" (or "c" when integral).
inline std::string to_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str(10);
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

mpq_class parse_rational(const std::string& text);

inline mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

}  // namespace freqlab
