#include "freqlab/envelope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr unsigned long kFixedBits = 192;

struct Vertex {
  double C;
  double Cp;
};

// min C sum(l) + |L| C' subject to C l + C' >= R_l, C, C' >= 0.
Vertex fit_lp(const std::map<std::uint64_t, double>& R) {
  double sum_l = 0.0, max_r = 0.0, max_slope = 0.0;
  for (const auto& [l, r] : R) {
    sum_l += static_cast<double>(l);
    max_r = std::max(max_r, r);
    if (l > 0) max_slope = std::max(max_slope, r / static_cast<double>(l));
  }
  std::vector<Vertex> cand{{0.0, max_r}};
  if (R.begin()->first > 0) cand.push_back({max_slope, 0.0});
  for (auto i = R.begin(); i != R.end(); ++i)
    for (auto j = std::next(i); j != R.end(); ++j) {
      const double C = (i->second - j->second) / (static_cast<double>(i->first) - static_cast<double>(j->first));
      const double Cp = i->second - C * static_cast<double>(i->first);
      if (C >= 0 && Cp >= 0) cand.push_back({C, Cp});
    }
  const double n = static_cast<double>(R.size());
  Vertex best{0.0, INFINITY};
  double best_obj = INFINITY;
  for (const auto& v : cand) {
    bool ok = true;
    for (const auto& [l, r] : R)
      if (v.C * static_cast<double>(l) + v.Cp < r * (1 - 1e-12) - 1e-12) ok = false;
    const double obj = v.C * sum_l + v.Cp * n;
    if (ok && (obj < best_obj - 1e-12 || (std::fabs(obj - best_obj) <= 1e-12 && v.C < best.C))) {
      best = v;
      best_obj = obj;
    }
  }
  return best;
}

}  // namespace

EnvelopeFit envelope_fit(const SpacedSequence& seq, const GrowthFunction& f, std::uint64_t Nmax) {
  if (Nmax == 0 || Nmax > seq.size()) throw PreconditionError("sequence must be built through Nmax");
  if (f.a_last() <= static_cast<std::uint64_t>(std::bit_width(Nmax)))
    throw CoverageError("a_spec must exceed the bit length of Nmax");
  EnvelopeFit fit;
  const std::size_t K = f.size();
  fit.S_partial = f.dyadic_sum(1, K);
  // a_i >= a_K + (i - K) gives sum_{i>K} 2^{-(a_i-1)} <= 2^{-(a_K-1)}; the reported bound is twice that.
  fit.tail_bound = mpq_class(mpz_class(1), pow2(static_cast<unsigned long>(f.a_last() - 2)));
  if (f.a_last() < 2) fit.tail_bound = 2;

  // 2S in fixed point: floor(2 S_partial 2^P)
  mpz_class twoS = floor_q(mpq_class(2 * fit.S_partial * mpq_class(pow2(kFixedBits))));
  const double slack_per_N = 2.0 * (std::ldexp(1.0, -static_cast<int>(kFixedBits)) + fit.tail_bound.get_d());
  const double scale = std::ldexp(1.0, -static_cast<int>(kFixedBits));

  std::vector<double> r(Nmax);
  std::vector<std::uint64_t> l(Nmax);
  const auto n = static_cast<std::int64_t>(Nmax);
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 1; s <= n; ++s) {
    const auto N = static_cast<std::uint64_t>(s);
    mpz_class v = to_mpz(seq.terms[N - 1]);
    v <<= kFixedBits;
    v -= twoS * to_mpz(N);
    r[N - 1] = v.get_d() * scale;
    l[N - 1] = decompose(N, f).lN;
  }

  std::map<std::uint64_t, double> R;
  fit.min_residual = INFINITY;
  fit.max_residual = -INFINITY;
  int last_sign = 0;
  for (std::uint64_t N = 1; N <= Nmax; ++N) {
    const double x = r[N - 1];
    const double bound = std::fabs(x) + slack_per_N * static_cast<double>(N);
    auto [it, fresh] = R.emplace(l[N - 1], bound);
    if (!fresh) it->second = std::max(it->second, bound);
    fit.min_residual = std::min(fit.min_residual, x);
    fit.max_residual = std::max(fit.max_residual, x);
    const int sg = (x > 0) - (x < 0);
    if (sg != 0) {
      if (last_sign != 0 && sg != last_sign) ++fit.sign_changes;
      last_sign = sg;
    }
  }
  const Vertex v = fit_lp(R);
  fit.C = v.C;
  fit.C_prime = v.Cp;

  auto& rep = fit.report;
  rep.name = "growth envelope fit";
  rep.identity = "|n_N(f) - 2 S N| <= C l_N + C', S = sum_i 2^{-(a_i - 1)}";
  rep.cases = Nmax;
  rep.details["Nmax"] = Nmax;
  rep.details["a_spec"] = f.spec();
  rep.details["S_approx"] = fit.S_partial.get_d();
  if (mpz_sizeinbase(fit.S_partial.get_den_mpz_t(), 2) <= 4096) rep.details["S_partial"] = to_string(fit.S_partial);
  rep.details["S_tail_bound_log2"] = -static_cast<double>(f.a_last()) + 2.0;
  rep.details["C"] = fit.C;
  rep.details["C_prime"] = fit.C_prime;
  rep.details["min_residual"] = fit.min_residual;
  rep.details["max_residual"] = fit.max_residual;
  rep.details["sign_changes"] = fit.sign_changes;
  nlohmann::json per_l = nlohmann::json::array();
  for (const auto& [ll, rr] : R) per_l.push_back({{"l_N", ll}, {"max_abs_residual", rr}});
  rep.details["per_l"] = per_l;
  return fit;
}

}  // namespace freqlab
