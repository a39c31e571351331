#include "freqlab/shift_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freqlab/bigint.hpp"
#include "freqlab/dyadic.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr Mult kMults[3] = {Mult::eps, Mult::eps2, Mult::eps4};
constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
// Largest interval exponent (in bits) the model will materialize.
constexpr double kMaxBits = 4e6;

std::size_t mult_index(Mult m) {
  switch (m) {
    case Mult::eps: return 0;
    case Mult::eps2: return 1;
    case Mult::eps4: return 2;
  }
  return 0;
}

mpz_class closed_b(std::uint64_t p) {
  mpz_class c = to_mpz(8 * p + 1);
  mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), p);
  return c;
}

// Smallest member of A_p that is >= lower, or kNone.
std::uint64_t first_member(std::uint64_t p, std::uint64_t lower) {
  if (p == 0 || p >= 63) return kNone;
  const std::uint64_t step = std::uint64_t{1} << p;
  const std::uint64_t r = (step >> 1) - 1;
  lower = std::max<std::uint64_t>(lower, 1);
  if (lower <= r) return r == 0 ? step : r;
  const std::uint64_t k = (lower - r + step - 1) / step;
  return r + k * step;
}

// 2^A - 2^B >= 2^C, exact.
bool exp_diff_at_least_exp(const ExpRational& A, const ExpRational& B, const ExpRational& C, bool* inconclusive) {
  if (inconclusive) *inconclusive = false;
  if (A.exponent() <= B.exponent()) return false;
  if (C.exponent() >= A.exponent()) return false;
  const mpq_class a1 = A.exponent() - 1;
  if (a1 >= B.exponent() && a1 >= C.exponent()) return true;
  if (A.floor() - B.ceil() >= C.ceil()) return true;
  if (A.ceil() - B.floor() < C.floor()) return false;
  if (inconclusive) *inconclusive = true;
  return false;
}

bool absorbs(const CounterexampleModel& m, std::uint64_t u, std::uint64_t p) {
  const ExpInterval e1 = m.interval(u, Mult::eps);
  const ExpInterval e2 = m.interval(u, Mult::eps2);
  const mpz_class g = to_mpz(2 * p);
  return exp_diff_at_least(e1.lo(), e2.lo(), g) && exp_diff_at_least(e2.hi(), e1.hi(), g);
}

}  // namespace

std::string constraint_text(int which) {
  switch (which) {
    case 1: return "a2*(1-4eps)/(1+4eps) > 1";
    case 2: return "a2*(1-2eps)-(1+2eps) >= 1";
    case 3: return "a2 >= 2+1/(2eps)";
    default: return "";
  }
}

nlohmann::json Feasibility::to_json() const {
  return {{"feasible", feasible}, {"binding", binding}, {"constraint", constraint}};
}

Feasibility check_feasibility(const mpz_class& a_sq, const mpq_class& eps) {
  if (sgn(a_sq) <= 0) throw DomainError("a2 must be positive");
  if (sgn(eps) <= 0) throw DomainError("eps must be positive");
  const mpq_class a(a_sq);
  Feasibility f;
  auto reject = [&](int which) {
    f.feasible = false;
    f.binding = which;
    f.constraint = constraint_text(which);
    return f;
  };
  const mpq_class one(1);
  if (!(one - 4 * eps > 0 && a * (one - 4 * eps) > one + 4 * eps)) return reject(1);
  if (!(a * (one - 2 * eps) - (one + 2 * eps) >= one)) return reject(2);
  if (!(a >= 2 + one / (2 * eps))) return reject(3);
  return f;
}

Params find_params(const ParamBounds& bounds) {
  if (bounds.d_max == 0 || bounds.a_sq_max == 0) throw PreconditionError("empty parameter search bounds");
  std::uint64_t rejected[4] = {0, 0, 0, 0};
  for (std::uint64_t d = 1; d <= bounds.d_max; ++d) {
    for (std::uint64_t a2 = 1; a2 <= bounds.a_sq_max; ++a2) {
      const mpz_class a_sq = to_mpz(a2);
      const mpq_class eps(1, to_mpz(d));
      const Feasibility f = check_feasibility(a_sq, eps);
      if (f.feasible) return {a_sq, eps};
      ++rejected[f.binding];
    }
  }
  const int worst = static_cast<int>(std::max_element(rejected + 1, rejected + 4) - rejected);
  throw SearchError("no feasible (d, a2) with d <= " + std::to_string(bounds.d_max) +
                    ", a2 <= " + std::to_string(bounds.a_sq_max) + "; binding constraint " +
                    constraint_text(worst));
}

Params default_params() { return {mpz_class(12), mpq_class(1, 20)}; }

bool exp_diff_at_least(const ExpRational& A, const ExpRational& B, const mpz_class& g, bool* inconclusive) {
  if (inconclusive) *inconclusive = false;
  if (sgn(g) < 0) throw PreconditionError("exp_diff_at_least expects g >= 0");
  if (A.exponent() <= B.exponent()) return A.exponent() == B.exponent() && sgn(g) == 0;
  if (sgn(g) == 0) return true;
  // 2^A - 2^B >= 2^{A-1} once A - B >= 1
  if (A.exponent() - B.exponent() >= 1 && ExpRational(A.exponent() - 1).compare(g) <= 0) return true;
  if (A.compare(g) >= 0) return false;
  // Integer enclosures of 2^{A+k} - 2^{B+k} against g 2^k, widening k until they separate.
  for (unsigned long k : {0UL, 16UL, 64UL, 256UL}) {
    const ExpRational Ak(A.exponent() + k), Bk(B.exponent() + k);
    const mpz_class gk = g << k;
    if (Ak.floor() - Bk.ceil() >= gk) return true;
    if (Ak.ceil() - Bk.floor() < gk) return false;
  }
  if (inconclusive) *inconclusive = true;
  return false;
}

CounterexampleModel::CounterexampleModel(mpz_class a_sq, mpq_class eps, std::uint64_t umax, std::uint64_t pmax)
    : a_sq_(std::move(a_sq)), eps_(std::move(eps)), umax_(umax), pmax_(pmax) {
  eps_.canonicalize();
  const Feasibility f = check_feasibility(a_sq_, eps_);
  if (!f.feasible) throw DomainError("infeasible parameters, binding constraint " + f.constraint);
  if (umax_ < 2) throw PreconditionError("umax must be at least 2");
  if (pmax_ < 1) throw PreconditionError("pmax must be at least 1");
  const double top_bits = (1.0 + 4.0 * eps_.get_d()) * std::pow(a_sq_.get_d(), static_cast<double>(umax_));
  if (top_bits > kMaxBits)
    throw ResourceError("umax = " + std::to_string(umax_) + " needs intervals of about " +
                        std::to_string(static_cast<long long>(top_bits)) + " bits");
  build_bounds();
  build_trim();
  build_b();
}

void CounterexampleModel::build_bounds() {
  lo_ceil_.resize(umax_);
  hi_floor_.resize(umax_);
  for (std::uint64_t u = 1; u <= umax_; ++u) {
    for (std::size_t i = 0; i < 3; ++i) {
      const ExpInterval I = interval(u, kMults[i]);
      lo_ceil_[u - 1][i] = I.lo().ceil();
      hi_floor_[u - 1][i] = I.hi().floor();
    }
  }
}

const mpz_class& CounterexampleModel::lo_ceil(std::uint64_t u, Mult m) const {
  if (u == 0 || u > umax_) throw CoverageError("scale " + std::to_string(u) + " outside the cached range");
  return lo_ceil_[u - 1][mult_index(m)];
}

const mpz_class& CounterexampleModel::hi_floor(std::uint64_t u, Mult m) const {
  if (u == 0 || u > umax_) throw CoverageError("scale " + std::to_string(u) + " outside the cached range");
  return hi_floor_[u - 1][mult_index(m)];
}

std::uint64_t CounterexampleModel::cell_of(std::uint64_t u) {
  if (u == 0) throw DomainError("scales start at 1");
  return delta(u);
}

std::uint64_t CounterexampleModel::max_gap(std::uint64_t p) {
  if (p == 0 || p >= 64) throw DomainError("cell index out of range");
  return std::uint64_t{1} << p;
}

void CounterexampleModel::build_trim() {
  u_min_.clear();
  const std::uint64_t cached = std::max<std::uint64_t>(pmax_, 16);
  for (std::uint64_t p = 1; p <= cached; ++p) {
    std::uint64_t u = first_member(p, p);
    while (u != kNone) {
      if (u > umax_) {
        // absorption only gets easier as u grows, so checking at umax suffices
        if (!absorbs(*this, umax_, p))
          throw ResourceError("cannot certify trimming for p = " + std::to_string(p) + " within umax");
        break;
      }
      if (absorbs(*this, u, p)) break;
      u += std::uint64_t{1} << p;
    }
    u_min_.push_back(u);
  }
}

std::uint64_t CounterexampleModel::u_min(std::uint64_t p) const {
  if (p == 0) throw DomainError("cell index starts at 1");
  if (p <= u_min_.size()) return u_min_[p - 1];
  // first members this far out are far above umax, where absorption follows from umax
  return first_member(p, p);
}

bool CounterexampleModel::in_trimmed_cell(std::uint64_t u, std::uint64_t p) const {
  return u >= 1 && cell_of(u) == p && u >= u_min(p);
}

std::vector<std::uint64_t> CounterexampleModel::cell_scales(std::uint64_t p, std::uint64_t ucap) const {
  std::vector<std::uint64_t> out;
  const std::uint64_t u0 = u_min(p);
  if (u0 == kNone) return out;
  for (std::uint64_t u = u0; u <= ucap; u += std::uint64_t{1} << p) out.push_back(u);
  return out;
}

bool CounterexampleModel::window_fits(const mpz_class& b, std::uint64_t p, std::uint64_t* gap_u) const {
  const mpz_class low = b - to_mpz(8 * p);
  // largest w with 2^{lo_w} < b - 8p
  std::uint64_t w = 0;
  while (interval(w + 1, Mult::eps).lo().compare(low) > 0) {
    ++w;
    if (w > umax_) throw ResourceError("b_p window beyond the scale cap");
  }
  if (w == 0) {
    if (gap_u) *gap_u = 1;
    return false;
  }
  if (gap_u) *gap_u = w + 1;
  const ExpInterval next = interval(w + 1, Mult::eps);
  const ExpInterval prev = interval(w, Mult::eps);
  // b + 4p < 2^{lo_{w+1}} - 2^{hi_w}; the integer side is tested as >= b + 4p + 1
  return exp_diff_at_least(next.lo(), prev.hi(), b + to_mpz(4 * p + 1));
}

mpz_class CounterexampleModel::fit_window(const mpz_class& cand, std::uint64_t p) const {
  mpz_class b = cand;
  for (;;) {
    std::uint64_t u = 0;
    if (window_fits(b, p, &u)) return b;
    // move the window's left end just past 2^{lo_u}, the start of the next gap
    if (u > umax_) throw ResourceError("b_p window beyond the scale cap");
    const mpz_class next = interval(u, Mult::eps).lo().floor() + to_mpz(8 * p + 1);
    if (next <= b) throw ConsistencyError("window search did not advance");
    b = next;
  }
}

void CounterexampleModel::build_b() {
  table_size_ = std::max<std::uint64_t>(pmax_, 64);
  b_.clear();
  mpz_class prev = 0;
  for (std::uint64_t p = 1; p <= table_size_; ++p) {
    mpz_class cand = closed_b(p);
    if (cand <= prev) cand = prev + 1;
    mpz_class b = fit_window(cand, p);
    b_.push_back(b);
    prev = b;
  }
  b_exc_.clear();
  for (std::uint64_t u = 2; u <= umax_; ++u) {
    const double e = interval(u, Mult::eps).lo().log2_approx();
    const std::uint64_t p_lo = std::max<std::uint64_t>(table_size_ + 1, e > 64 ? static_cast<std::uint64_t>(e) - 64 : 0);
    const std::uint64_t p_hi = static_cast<std::uint64_t>(std::ceil(e)) + 2;
    for (std::uint64_t p = p_lo; p <= p_hi; ++p) {
      const mpz_class c = closed_b(p);
      const mpz_class f = fit_window(c, p);
      if (f != c) b_exc_[p] = f;
    }
  }
  if (b(table_size_ + 1) <= b_.back()) throw ConsistencyError("b_p not increasing past the table");
  for (const auto& [p, v] : b_exc_) {
    if (!(b(p - 1) < v && v < b(p + 1))) throw ConsistencyError("b_p not increasing around p = " + std::to_string(p));
  }
}

mpz_class CounterexampleModel::b(std::uint64_t p) const {
  if (p == 0) throw DomainError("periods are indexed from p = 1");
  if (p <= table_size_) return b_[p - 1];
  if (auto it = b_exc_.find(p); it != b_exc_.end()) return it->second;
  const double zone = interval(umax_ + 1, Mult::eps).lo().log2_approx();
  if (static_cast<double>(p) + 64 >= zone) throw ResourceError("b_p requested beyond the scale cap");
  return closed_b(p);
}

SymbolicSet CounterexampleModel::symbolic_E(std::uint64_t p) const {
  SymbolicSet s;
  const auto scales = cell_scales(p, umax_);
  const mpz_class period = b(p);
  for (std::uint64_t u : scales) {
    const ExpInterval I = interval(u, Mult::eps);
    s.components.push_back({period, I.lo(), I.hi()});
  }
  if (!scales.empty()) s.next_lo = interval(scales.back() + max_gap(p), Mult::eps).lo();
  return s;
}

nlohmann::json CounterexampleModel::to_json() const {
  nlohmann::json j;
  j["a_sq"] = to_string(a_sq_);
  j["eps"] = to_string(eps_);
  j["umax"] = umax_;
  j["pmax"] = pmax_;
  j["partition"] = "A_p = {u : delta_u = p}, M_p = 2^p";
  nlohmann::json bs = nlohmann::json::array();
  nlohmann::json umins = nlohmann::json::array();
  nlohmann::json cells = nlohmann::json::object();
  for (std::uint64_t p = 1; p <= pmax_; ++p) {
    bs.push_back(to_string(b(p)));
    umins.push_back(u_min(p));
    cells[std::to_string(p)] = cell_scales(p, umax_);
  }
  j["b"] = bs;
  j["u_min"] = umins;
  j["trimmed_cells"] = cells;
  nlohmann::json exc = nlohmann::json::object();
  for (const auto& [p, v] : b_exc_) exc[std::to_string(p)] = to_string(v);
  j["b_exceptions"] = exc;
  nlohmann::json iv = nlohmann::json::array();
  for (std::uint64_t u = 1; u <= umax_; ++u) {
    const ExpInterval I = interval(u, Mult::eps);
    iv.push_back({{"u", u}, {"lo_exponent", to_string(I.lo().exponent())}, {"hi_exponent", to_string(I.hi().exponent())}});
  }
  j["intervals_eps"] = iv;
  return j;
}

std::vector<mpz_class> choose_b(const CounterexampleModel& model, std::uint64_t pmax) {
  std::vector<mpz_class> out;
  out.reserve(pmax);
  for (std::uint64_t p = 1; p <= pmax; ++p) out.push_back(model.b(p));
  return out;
}

CheckReport verify_interval_axioms(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t umax) {
  if (umax < 2) throw PreconditionError("umax must be at least 2");
  CheckReport r;
  r.name = "interval_axioms";
  r.identity = "I_u^{4eps} and I_v^{4eps} disjoint; I_u^{2eps} - I_v^{2eps} inside I_u^{4eps}; 1 <= v < u <= umax";
  nlohmann::json proof = nlohmann::json::array();
  const mpq_class one(1);
  for (std::uint64_t u = 2; u <= umax; ++u) {
    const ExpInterval I4u(a_sq, eps, u, Mult::eps4);
    const ExpInterval I2u(a_sq, eps, u, Mult::eps2);
    // 2^{X(a2(1-2eps)-(1+2eps))} (1 - 2^{2eps(2-a2)X}) >= 1 with X = a2^{u-1}; sufficient form:
    // first exponent >= 1 and second exponent <= -1
    mpz_class X;
    mpz_pow_ui(X.get_mpz_t(), a_sq.get_mpz_t(), u - 1);
    const mpq_class e1 = mpq_class(X) * (mpq_class(a_sq) * (one - 2 * eps) - (one + 2 * eps));
    const mpq_class e2 = 2 * eps * (2 - mpq_class(a_sq)) * mpq_class(X);
    proof.push_back({{"u", u}, {"first_exponent", to_string(e1)}, {"second_exponent", to_string(e2)},
                     {"holds", e1 >= 1 && e2 <= -1}});
    for (std::uint64_t v = 1; v < u; ++v) {
      ++r.cases;
      const ExpInterval I4v(a_sq, eps, v, Mult::eps4);
      const ExpInterval I2v(a_sq, eps, v, Mult::eps2);
      const std::string at = "(u,v)=(" + std::to_string(u) + "," + std::to_string(v) + ")";
      const bool disjoint = I4v.hi() < I4u.lo() || I4u.hi() < I4v.lo();
      if (!disjoint) r.fail("disjointness fails at " + at);
      bool inconclusive = false;
      if (!exp_diff_at_least_exp(I2u.lo(), I2v.hi(), I4u.lo(), &inconclusive))
        r.fail("difference lower end below I_u^{4eps} at " + at + (inconclusive ? " (inconclusive)" : ""));
      if (!(I2u.hi().exponent() <= I4u.hi().exponent())) r.fail("difference upper end above I_u^{4eps} at " + at);
    }
  }
  r.details["a_sq"] = to_string(a_sq);
  r.details["eps"] = to_string(eps);
  r.details["umax"] = umax;
  r.details["growth_inequality"] = proof;
  return r;
}

CheckReport verify_interval_axioms(const CounterexampleModel& model, std::uint64_t umax) {
  return verify_interval_axioms(model.a_sq(), model.eps(), umax);
}

std::uint64_t eps_scale_of(const CounterexampleModel& model, const mpz_class& n) {
  for (std::uint64_t u = 1;; ++u) {
    if (u <= model.umax()) {
      if (n < model.lo_ceil(u, Mult::eps)) return 0;
      if (n <= model.hi_floor(u, Mult::eps)) return u;
      continue;
    }
    const ExpInterval I = model.interval(u, Mult::eps);
    if (I.lo().compare(n) < 0) return 0;
    if (I.hi().compare(n) <= 0) return u;
  }
}

bool in_E(const CounterexampleModel& model, std::uint64_t p, const mpz_class& n) {
  if (sgn(n) <= 0) throw PreconditionError("in_E expects n >= 1");
  const mpz_class bp = model.b(p);
  if (!mpz_divisible_p(n.get_mpz_t(), bp.get_mpz_t())) return false;
  const std::uint64_t u = eps_scale_of(model, n);
  return u != 0 && model.in_trimmed_cell(u, p);
}

NonFhcBound nonfhc_bound(const CounterexampleModel& model, std::uint64_t p) {
  if (p == 0) throw DomainError("p must be at least 1");
  NonFhcBound out;
  out.Q = std::max(model.pmax(), p);
  mpq_class sum = 0;
  for (std::uint64_t q = p + 1; q <= out.Q; ++q) sum += mpq_class(to_mpz(8 * q + 1), model.b(q));
  sum += mpq_class(mpz_class(1), pow2(out.Q));
  out.value = 6 * sum;
  out.value.canonicalize();
  return out;
}

std::pair<mpq_class, mpq_class> vanish_exponents(const mpz_class& a_sq, const mpq_class& eps) {
  const mpq_class one(1);
  const mpq_class a(a_sq);
  mpq_class e1 = (one + eps) / ((one - eps) * a) - 1;
  mpq_class e3 = (one - 4 * eps == 0) ? mpq_class(0) : (one + 4 * eps) / ((one - 4 * eps) * a) - 1;
  e1.canonicalize();
  e3.canonicalize();
  return {e1, e3};
}

namespace {

CheckReport vanish_impl(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t p, std::uint64_t u0,
                        std::uint64_t k_lo, std::uint64_t k_hi) {
  if (p == 0 || p >= 63) throw DomainError("p out of range");
  if (k_lo == 0 || k_hi < k_lo) throw PreconditionError("k range must be non-empty and start at 1");
  CheckReport r;
  r.name = "vanish_terms";
  r.identity = "a2^{-1}(1+eps)/(1-eps) - 1 < 0 and a2^{-1}(1+4eps)/(1-4eps) - 1 < 0";
  const mpq_class one(1);
  const auto [e1, e3] = vanish_exponents(a_sq, eps);
  r.details["exponent_first"] = to_string(e1);
  r.details["exponent_third"] = to_string(e3);
  if (!(one - 4 * eps > 0)) r.fail("1 - 4 eps <= 0, third exponent undefined");
  if (sgn(e1) >= 0) r.fail("first exponent " + to_string(e1) + " is not negative");
  if (sgn(e3) >= 0) r.fail("third exponent " + to_string(e3) + " is not negative");
  r.cases = 2;
  if (!r.passed) return r;
  const std::uint64_t step = std::uint64_t{1} << p;
  const double lg_a = std::log2(a_sq.get_d());
  nlohmann::json rows = nlohmann::json::array();
  mpq_class last;
  double last3 = 0.0;
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    const std::uint64_t n_next = u0 + k * step;
    if (static_cast<double>(n_next) * lg_a > 1e6) throw ResourceError("k range too large for exact exponents");
    mpz_class X;
    mpz_pow_ui(X.get_mpz_t(), a_sq.get_mpz_t(), n_next);
    const mpq_class scale = (one - eps) * mpq_class(X);
    const mpq_class t1 = scale * e1;
    const mpq_class t3 = scale * e3;
    const double t3_log2 = std::log2(2.0 * (1.0 + static_cast<double>(step))) + t3.get_d();
    ++r.cases;
    if (k > k_lo && !(t1 < last)) r.fail("first term exponent not decreasing at k = " + std::to_string(k));
    if (k > k_lo && !(t3_log2 < last3)) r.fail("third term exponent not decreasing at k = " + std::to_string(k));
    last = t1;
    last3 = t3_log2;
    rows.push_back({{"k", k}, {"n_k_plus_1", n_next}, {"log2_first", to_string(t1)},
                    {"log2_first_approx", t1.get_d()}, {"log2_third_approx", t3_log2}});
  }
  r.details["p"] = p;
  r.details["terms"] = rows;
  return r;
}

}  // namespace

CheckReport vanish_terms_check(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t p, std::uint64_t k_lo,
                               std::uint64_t k_hi) {
  return vanish_impl(a_sq, eps, p, first_member(p, p), k_lo, k_hi);
}

CheckReport vanish_terms_check(const CounterexampleModel& model, std::uint64_t p, std::uint64_t k_lo,
                               std::uint64_t k_hi) {
  return vanish_impl(model.a_sq(), model.eps(), p, model.u_min(p), k_lo, k_hi);
}

}  // namespace freqlab
