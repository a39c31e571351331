#include "freqlab/exp_rational.hpp"

#include <cmath>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr double kBracketRel = 1e-12;

unsigned long exponent_bits(const mpz_class& c) {
  if (!mpz_fits_ulong_p(c.get_mpz_t()))
    throw ResourceError("exponent numerator exceeds the machine word range");
  return mpz_get_ui(c.get_mpz_t());
}

}  // namespace

ExpRational::ExpRational(mpq_class exponent) : e_(std::move(exponent)) {
  e_.canonicalize();
  e_approx_ = e_.get_d();
}

double ExpRational::ln_approx() const { return e_approx_ * std::log(2.0); }

int ExpRational::bracket(const mpz_class& n) const {
  if (sgn(n) <= 0) return -1;
  const double l = log2_mpz(n);
  const double tol = kBracketRel * (1.0 + std::fabs(e_approx_));
  if (l < e_approx_ - tol) return -1;
  if (l > e_approx_ + tol) return 1;
  return 0;
}

int ExpRational::compare_exact(const mpz_class& n) const {
  if (sgn(n) <= 0) return -1;
  // 2^e < 1 <= n whenever e < 0
  if (sgn(e_) < 0) return 1;
  const unsigned long d = exponent_bits(e_.get_den());
  const unsigned long c = exponent_bits(e_.get_num());
  mpz_class nd;
  mpz_pow_ui(nd.get_mpz_t(), n.get_mpz_t(), d);
  // compare n^d with 2^c through the bit length, never materializing 2^c
  const std::size_t bits = mpz_sizeinbase(nd.get_mpz_t(), 2);
  if (bits <= c) return -1;
  if (bits > c + 1) return 1;
  return mpz_scan1(nd.get_mpz_t(), 0) == c ? 0 : 1;
}

int ExpRational::compare(const mpz_class& n) const {
  const int b = bracket(n);
  return b != 0 ? b : compare_exact(n);
}

int ExpRational::bracket_status(const mpz_class& n) const {
  const int b = bracket(n);
  if (b == 0) return 1;
  return b == compare_exact(n) ? 0 : -1;
}

mpz_class ExpRational::floor() const {
  if (sgn(e_) < 0) return 0;
  const unsigned long d = exponent_bits(e_.get_den());
  const mpz_class p = pow2(exponent_bits(e_.get_num()));
  mpz_class r;
  mpz_root(r.get_mpz_t(), p.get_mpz_t(), d);
  return r;
}

mpz_class ExpRational::ceil() const {
  if (sgn(e_) < 0) return 1;
  const unsigned long d = exponent_bits(e_.get_den());
  const mpz_class p = pow2(exponent_bits(e_.get_num()));
  mpz_class r;
  const int exact = mpz_root(r.get_mpz_t(), p.get_mpz_t(), d);
  if (!exact) r += 1;
  return r;
}

std::string ExpRational::to_string() const { return "2^(" + freqlab::to_string(e_) + ")"; }

std::string mult_name(Mult m) {
  switch (m) {
    case Mult::eps: return "eps";
    case Mult::eps2: return "2eps";
    case Mult::eps4: return "4eps";
  }
  return "?";
}

namespace {

mpq_class scale_exponent(const mpz_class& a_sq, std::uint64_t u) {
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), a_sq.get_mpz_t(), u);
  return mpq_class(p);
}

}  // namespace

ExpInterval::ExpInterval(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t u, Mult mult)
    : lo_(mpq_class((1 - mult_factor(mult) * eps) * scale_exponent(a_sq, u))),
      hi_(mpq_class((1 + mult_factor(mult) * eps) * scale_exponent(a_sq, u))),
      u_(u),
      mult_(mult) {
  if (!(lo_ < hi_)) throw DomainError("interval needs 1 - m*eps < 1 + m*eps (eps > 0)");
}

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw DomainError("not a rational number: '" + text + "'");
  if (q.get_den() == 0) throw DomainError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

}  // namespace freqlab
