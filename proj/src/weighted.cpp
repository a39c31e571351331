#include "freqlab/weighted.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr std::uint64_t kExhaustivePairs = 5000;

std::uint64_t digits_between(std::uint64_t N, std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi || lo >= 64) return 0;
  hi = std::min<std::uint64_t>(hi, 63);
  const std::uint64_t width = hi - lo + 1;
  const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
  return N & (mask << lo);
}

std::uint64_t digit(std::uint64_t N, std::uint64_t pos) { return pos < 64 ? (N >> pos) & 1 : 0; }

mpz_class as_integer(const mpq_class& q, const char* what) {
  if (q.get_den() != 1) throw ConsistencyError(std::string(what) + " is not an integer");
  return q.get_num();
}

std::uint64_t max_delta_upto(std::uint64_t kmax) {
  // delta_k <= floor(log2(k + 1)) + 1, attained at k = 2^m - 1
  return static_cast<std::uint64_t>(std::bit_width(kmax + 1));
}

}  // namespace

GrowthFunction::GrowthFunction(std::vector<std::uint64_t> a, std::string rule)
    : a_(std::move(a)), rule_(std::move(rule)) {
  if (a_.empty()) throw DomainError("a_spec must not be empty");
  if (a_.front() != 1) throw DomainError("a_spec must start with a_1 = 1");
  for (std::size_t i = 1; i < a_.size(); ++i)
    if (a_[i] <= a_[i - 1])
      throw DomainError("a_spec must be strictly increasing (a_" + std::to_string(i) + " >= a_" +
                        std::to_string(i + 1) + ")");
}

std::uint64_t GrowthFunction::operator()(std::uint64_t j) const {
  if (j == 0 || j > a_.back())
    throw CoverageError("f(" + std::to_string(j) + ") outside [1, " + std::to_string(a_.back()) + "]");
  return static_cast<std::uint64_t>(std::upper_bound(a_.begin(), a_.end(), j) - a_.begin());
}

std::uint64_t GrowthFunction::a(std::size_t m) const {
  if (m == 0 || m > a_.size()) throw CoverageError("a_" + std::to_string(m) + " is not materialized");
  return a_[m - 1];
}

mpq_class GrowthFunction::dyadic_sum(std::size_t lo, std::size_t hi) const {
  lo = std::max<std::size_t>(lo, 1);
  hi = std::min(hi, a_.size());
  if (lo > hi) return 0;
  // common denominator 2^{a_hi - 1}
  const std::uint64_t top = a_[hi - 1] - 1;
  mpz_class num = 0;
  for (std::size_t i = lo; i <= hi; ++i) num += pow2(static_cast<unsigned long>(top - (a_[i - 1] - 1)));
  mpq_class q(num, pow2(static_cast<unsigned long>(top)));
  q.canonicalize();
  return q;
}

std::int64_t GrowthFunction::start_offset() const { return 2 - static_cast<std::int64_t>((*this)(2)); }

GrowthFunction growth_from_a(std::vector<std::uint64_t> a) { return GrowthFunction(std::move(a)); }

GrowthFunction identity_a(std::size_t mmax) {
  std::vector<std::uint64_t> a(mmax);
  for (std::size_t i = 0; i < mmax; ++i) a[i] = i + 1;
  return GrowthFunction(std::move(a), "identity");
}

SpacedSequence build_nf(const GrowthFunction& f, std::uint64_t kmax, Exec exec) {
  if (kmax == 0) throw DomainError("build_nf needs kmax >= 1");
  const std::uint64_t need = max_delta_upto(kmax);
  if (kmax >= 2 && need > f.a_last())
    throw CoverageError("f is defined up to " + std::to_string(f.a_last()) + " but delta reaches " +
                        std::to_string(need) + " below kmax");
  SpacedSequence s;
  s.generator = SpacedSequence::Generator::weighted;
  s.terms.resize(kmax);
  s.terms[0] = 2;
  const auto n = static_cast<std::int64_t>(kmax);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t k = 2; k <= n; ++k) {
    const auto u = static_cast<std::uint64_t>(k);
    s.terms[u - 1] = f(delta(u - 1)) + f(delta(u));
  }
  kernels::prefix_sum(s.terms, exec);
  return s;
}

mpz_class nf_at_pow2(std::size_t m, std::uint64_t q, const GrowthFunction& f) {
  if (m == 0) throw DomainError("m must be >= 1");
  if (m + 1 > f.size()) throw CoverageError("nf_at_pow2 needs a_{m+1}");
  const std::uint64_t am = f.a(m), am1 = f.a(m + 1);
  if (q >= am1 - am) throw DomainError("q must satisfy 0 <= q < a_{m+1} - a_m = " + std::to_string(am1 - am));
  const mpq_class S = f.dyadic_sum(1, m);
  const mpq_class P(pow2(static_cast<unsigned long>(am + q + 1)));
  const mpq_class general = -1 - 2 * mpq_class(m) + 2 * mpq_class(f(1 + am + q)) + P * S;
  const mpq_class split = q + 1 < am1 - am ? mpq_class(-1 + P * S)
                                           : mpq_class(1 + mpq_class(pow2(static_cast<unsigned long>(am1))) * S);
  const mpz_class a = as_integer(general, "n_{2^{a_m+q}}");
  if (general != split) throw ConsistencyError("the two closed forms for n_{2^{a_m+q}} disagree");
  return a + f.start_offset();
}

mpz_class nf_at_pow2_minus1(std::uint64_t L, const GrowthFunction& f) {
  if (L < 2) throw DomainError("nf_at_pow2_minus1 needs L >= 2");
  std::size_t l = 0;
  for (std::size_t i = 1; i < f.size(); ++i)
    if (f.a(i) - 1 <= L && L < f.a(i + 1) - 1) l = i;
  if (l == 0) throw CoverageError("L = " + std::to_string(L) + " is beyond the materialized a-blocks");
  mpq_class v;
  if (L == f.a(l) - 1)
    v = mpq_class(pow2(static_cast<unsigned long>(f.a(l)))) * f.dyadic_sum(1, l - 1) - mpq_class(l);
  else
    v = mpq_class(pow2(static_cast<unsigned long>(1 + L))) * f.dyadic_sum(1, l) - mpq_class(l + 2);
  return as_integer(v, "n_{2^L - 1}") + f.start_offset();
}

std::uint64_t Decomposition::reassemble() const {
  std::uint64_t v = (std::uint64_t{1} << L0) - 1 + X0 + XN;
  for (const auto& [j, x] : X) v += x;
  return v;
}

Decomposition decompose(std::uint64_t N, const GrowthFunction& f) {
  if (N == 0) throw DomainError("decompose needs N >= 1");
  Decomposition d;
  d.N = N;
  d.L0 = delta(N) - 1;
  const std::uint64_t first_free = 1 + d.L0;
  for (std::size_t l = 2; l <= f.size(); ++l)
    if (f.a(l - 1) <= first_free && first_free < f.a(l)) d.l0 = l;
  if (d.l0 == 0) throw CoverageError("a_spec does not reach past 1 + L0 = " + std::to_string(first_free));
  d.tau0 = d.L0 + 1 == f.a(d.l0 - 1) ? 1 : 0;
  d.q0 = first_free - f.a(d.l0 - 1);
  d.pure = (N >> first_free) == 0;

  if (d.pure) {
    d.lN = d.l0 - 1;
    return d;
  }
  d.wN = static_cast<std::uint64_t>(std::bit_width(N)) - 1;
  for (std::size_t l = 1; l <= f.size(); ++l)
    if (f.a(l) <= d.wN) d.lN = l;
  if (d.lN + 1 > f.size())
    throw CoverageError("a_spec must exceed the top digit " + std::to_string(d.wN) + " of N");
  d.qN = d.wN - f.a(d.lN);
  if (d.lN + 1 == d.l0) {
    d.X0 = digits_between(N, first_free, d.wN);
    return d;
  }
  d.X0 = digits_between(N, first_free, f.a(d.l0) - 1);
  for (std::size_t j = d.l0; j < d.lN; ++j) d.X[j] = digits_between(N, f.a(j), f.a(j + 1) - 1);
  d.XN = digits_between(N, f.a(d.lN), d.wN);
  return d;
}

mpz_class nf_closed(std::uint64_t N, const GrowthFunction& f) {
  const Decomposition d = decompose(N, f);
  if (d.reassemble() != N) throw ConsistencyError("decomposition does not reassemble N");
  const std::size_t K = f.size();
  auto S = [&](std::size_t lo) { return f.dyadic_sum(lo, K); };

  const mpq_class S1 = S(1);
  mpq_class v = 2 * mpq_class(to_mpz(N)) * S1 + 2 * S1;
  std::uint64_t alpha_terms = 0;
  for (std::size_t j = d.l0; j <= d.lN + 1 && j <= K; ++j) alpha_terms += digit(N, f.a(j) - 1);
  v += 2 * mpq_class(alpha_terms);
  v -= mpq_class(pow2(static_cast<unsigned long>(1 + d.L0))) * S(d.l0 - static_cast<std::size_t>(d.tau0));
  v -= 2 * S(d.l0) * mpq_class(to_mpz(d.X0));
  for (const auto& [j, x] : d.X) v -= 2 * S(j + 1) * mpq_class(to_mpz(x));
  v -= 2 * S(d.lN + 1) * mpq_class(to_mpz(d.XN));
  v += -mpq_class(d.l0) - 1 + 2 * d.tau0;

  // Every S(.) above was truncated at K; the common tail enters with this coefficient.
  mpz_class tail = 2 * to_mpz(N) + 2 - pow2(static_cast<unsigned long>(1 + d.L0)) - 2 * to_mpz(d.X0) -
                   2 * to_mpz(d.XN);
  for (const auto& [j, x] : d.X) tail -= 2 * to_mpz(x);
  if (tail != 0) throw ConsistencyError("tail coefficient of the closed form is not zero");
  return as_integer(v, "n_N(f)") + f.start_offset();
}

CheckReport separation_check(const SpacedSequence& seq, const GrowthFunction& f, std::uint64_t kmax, Exec exec) {
  if (kmax > seq.size()) throw PreconditionError("sequence is built only to " + std::to_string(seq.size()));
  CheckReport rep;
  rep.name = "separation";
  rep.identity = "|n_k(f) - n_l(f)| >= f(delta_k) + f(delta_l) for k != l";
  const auto& t = seq.terms;
  const std::uint64_t E = std::min(kmax, kExhaustivePairs);

  std::vector<std::uint64_t> fd(kmax + 2, 0);
  for (std::uint64_t k = 1; k <= kmax; ++k) fd[k] = f(delta(k));

  std::uint64_t violations = 0, tight = 0, tight_nonadjacent = 0;
  std::uint64_t first_bad = ~std::uint64_t{0};
  const auto n = static_cast<std::int64_t>(E);
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : violations, tight, tight_nonadjacent) \
    reduction(min : first_bad) if (exec == Exec::parallel)
  for (std::int64_t ks = 1; ks <= n; ++ks) {
    const auto k = static_cast<std::uint64_t>(ks);
    for (std::uint64_t l = k + 1; l <= E; ++l) {
      const std::uint64_t gap = t[l - 1] > t[k - 1] ? t[l - 1] - t[k - 1] : t[k - 1] - t[l - 1];
      const std::uint64_t need = fd[k] + fd[l];
      if (gap < need) {
        ++violations;
        first_bad = std::min(first_bad, k * (E + 1) + l);
      } else if (gap == need) {
        ++tight;
        if (l != k + 1) ++tight_nonadjacent;
      }
    }
  }
  rep.cases = E * (E - 1) / 2;
  if (violations > 0) {
    std::ostringstream os;
    os << "pair (k,l)=(" << first_bad / (E + 1) << "," << first_bad % (E + 1) << ")";
    rep.fail(os.str());
  }

  // Adjacent gaps telescope: n_l - n_k = f(d_k) + f(d_l) + 2 sum_{k<i<l} f(d_i).
  std::uint64_t gap_bad = 0;
  for (std::uint64_t k = 1; k < kmax; ++k)
    if (t[k] - t[k - 1] != fd[k] + fd[k + 1]) {
      if (gap_bad == 0) rep.fail("adjacent gap identity fails at k=" + std::to_string(k));
      ++gap_bad;
    }
  rep.cases += kmax > 0 ? kmax - 1 : 0;
  rep.details["exhaustive_upto"] = E;
  rep.details["gap_identity_upto"] = kmax;
  rep.details["violations"] = violations;
  rep.details["tight_pairs"] = tight;
  rep.details["tight_nonadjacent_pairs"] = tight_nonadjacent;
  for (std::uint64_t k = 1; k < std::min<std::uint64_t>(E, 6); ++k)
    rep.witness("tight adjacent (" + std::to_string(k) + "," + std::to_string(k + 1) + ")");
  return rep;
}

CheckReport closed_form_check(const GrowthFunction& f, std::uint64_t Nmax, Exec exec) {
  CheckReport rep;
  rep.name = "weighted closed form";
  rep.identity = "n_N(f) from the decomposition formula equals the recurrence n_1 = 2, "
                 "n_k = n_{k-1} + f(delta_{k-1}) + f(delta_k)";
  const auto seq = build_nf(f, Nmax, exec);
  std::uint64_t first_bad = Nmax + 1;
  const auto n = static_cast<std::int64_t>(Nmax);
#pragma omp parallel for schedule(dynamic, 64) reduction(min : first_bad) if (exec == Exec::parallel)
  for (std::int64_t s = 1; s <= n; ++s) {
    const auto N = static_cast<std::uint64_t>(s);
    try {
      if (nf_closed(N, f) != to_mpz(seq.terms[N - 1])) first_bad = std::min(first_bad, N);
    } catch (const std::exception&) {
      first_bad = std::min(first_bad, N);
    }
  }
  rep.cases = Nmax;
  if (first_bad <= Nmax) {
    std::string why;
    try {
      why = to_string(nf_closed(first_bad, f)) + " vs recurrence " + std::to_string(seq.terms[first_bad - 1]);
    } catch (const std::exception& e) {
      why = e.what();
    }
    rep.fail("N=" + std::to_string(first_bad) + ": " + why);
  }
  rep.details["Nmax"] = Nmax;
  rep.details["a_spec"] = f.spec();
  rep.details["start_offset"] = f.start_offset();
  return rep;
}

}  // namespace freqlab
