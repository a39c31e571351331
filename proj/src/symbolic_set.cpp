#include "freqlab/symbolic_set.hpp"

#include <algorithm>
#include <cmath>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
// Below this exponent the integer endpoints are materialized and logged directly.
constexpr double kSmallExponent = 60.0;

}  // namespace

std::pair<double, double> harmonic_mass_bounds(const mpz_class& b, const ExpRational& c, const ExpRational& d,
                                               bool* spec_branch) {
  if (sgn(b) <= 0) throw StructuralError("component period must be >= 1");
  if (d < c) return {0.0, 0.0};
  const double bd = b.get_d();
  const bool large = c.compare(2 * b) <= 0;  // 2b <= c
  if (spec_branch) *spec_branch = large;

  if (large) {
    double width = 0.0;  // ln d - ln c, from the exponents when they are huge
    double floor_ceil_loss = 0.0;
    if (d.log2_approx() < kSmallExponent) {
      width = std::log(d.floor().get_d()) - std::log(c.ceil().get_d());
    } else {
      width = mpq_class(d.exponent() - c.exponent()).get_d() * kLn2;
      // ln floor(d) >= ln d - 2/d, ln ceil(c) <= ln c + 1/c
      floor_ceil_loss = 2.0 * std::exp2(-d.log2_approx()) + std::exp2(-c.log2_approx());
    }
    const double exact_width = mpq_class(d.exponent() - c.exponent()).get_d() * kLn2;
    const double corr = 2.0 * std::log1p(bd * std::exp2(-c.log2_approx()));
    return {(width - floor_ceil_loss - corr) / bd, (exact_width + corr) / bd};
  }

  // c < 2b: multiples b t with alpha <= t <= beta, and
  // ln((beta+1)/alpha) <= sum_{t=alpha}^{beta} 1/t <= 1/alpha + ln(beta/alpha).
  mpz_class alpha, beta;
  const mpz_class cc = c.ceil(), df = d.floor();
  mpz_cdiv_q(alpha.get_mpz_t(), cc.get_mpz_t(), b.get_mpz_t());
  mpz_fdiv_q(beta.get_mpz_t(), df.get_mpz_t(), b.get_mpz_t());
  if (alpha < 1) alpha = 1;
  if (beta < alpha) return {0.0, 0.0};
  const double la = ln_mpz(alpha);
  const double lo = ln_mpz(mpz_class(beta + 1)) - la;
  const double hi = 1.0 / alpha.get_d() + ln_mpz(beta) - la;
  return {lo / bd, hi / bd};
}

SymbolicBounds symbolic_log_density_bounds(const SymbolicSet& set, std::size_t p_horizon) {
  SymbolicBounds out;
  const auto& comps = set.components;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].hi < comps[i].lo) throw StructuralError("component " + std::to_string(i) + " has hi < lo");
    if (i + 1 < comps.size() && !(comps[i].hi < comps[i + 1].lo))
      throw StructuralError("components " + std::to_string(i) + " and " + std::to_string(i + 1) + " overlap");
  }
  if (set.next_lo && !comps.empty() && !(comps.back().hi < *set.next_lo))
    throw StructuralError("next left endpoint overlaps the last component");

  std::size_t usable = comps.size();
  if (!set.next_lo && usable > 0) --usable;
  if (p_horizon > 0) usable = std::min(usable, p_horizon);
  if (usable == 0) return out;

  out.lower = INFINITY;
  out.upper = INFINITY;
  for (std::size_t i = 0; i < usable; ++i) {
    const ExpRational& next = i + 1 < comps.size() ? comps[i + 1].lo : *set.next_lo;
    ComponentBound cb;
    auto [lo, hi] = harmonic_mass_bounds(comps[i].period, comps[i].lo, comps[i].hi, &cb.spec_branch);
    const double norm = next.ln_approx();
    cb.lower = std::max(0.0, lo / norm);
    cb.upper = hi / norm;
    out.lower = std::min(out.lower, cb.lower);
    out.upper = std::min(out.upper, cb.upper);
    out.per_component.push_back(cb);
  }
  return out;
}

nlohmann::json SymbolicBounds::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : per_component)
    comps.push_back({{"lower", c.lower}, {"upper", c.upper}, {"branch", c.spec_branch ? "asymptotic" : "integral"}});
  return {{"lower", lower}, {"upper", upper}, {"components", comps}};
}

}  // namespace freqlab
