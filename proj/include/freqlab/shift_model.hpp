#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqlab/check_report.hpp"
#include "freqlab/exp_rational.hpp"
#include "freqlab/symbolic_set.hpp"

namespace freqlab {

// The three parameter constraints, in the order they are tested.
//   1: a2 (1 - 4 eps) / (1 + 4 eps) > 1
//   2: a2 (1 - 2 eps) - (1 + 2 eps) >= 1
//   3: a2 >= 2 + 1 / (2 eps)
struct Feasibility {
  bool feasible = true;
  int binding = 0;  // first violated constraint, 0 when feasible
  std::string constraint;
  nlohmann::json to_json() const;
};

Feasibility check_feasibility(const mpz_class& a_sq, const mpq_class& eps);
std::string constraint_text(int which);

struct ParamBounds {
  std::uint64_t d_max = 40;
  std::uint64_t a_sq_max = 40;
};

struct Params {
  mpz_class a_sq;
  mpq_class eps;
};

// Lexicographically smallest (d, a2) with eps = 1/d. Throws SearchError naming
// the constraint that rejected the most candidates.
Params find_params(const ParamBounds& bounds);

// The default model parameters used by the CLI and the suites.
Params default_params();

// Decides 2^A - 2^B >= g exactly. Sets *inconclusive (and returns false) only
// when integer enclosures refined by 256 extra bits still cannot separate the sides.
bool exp_diff_at_least(const ExpRational& A, const ExpRational& B, const mpz_class& g,
                       bool* inconclusive = nullptr);

class CounterexampleModel {
 public:
  // Throws DomainError naming the binding constraint when infeasible.
  CounterexampleModel(mpz_class a_sq, mpq_class eps, std::uint64_t umax = 5, std::uint64_t pmax = 8);

  const mpz_class& a_sq() const { return a_sq_; }
  const mpq_class& eps() const { return eps_; }
  std::uint64_t umax() const { return umax_; }
  std::uint64_t pmax() const { return pmax_; }

  ExpInterval interval(std::uint64_t u, Mult m) const { return ExpInterval(a_sq_, eps_, u, m); }
  // Exact integer enclosure of I_u^m, cached for u <= umax.
  const mpz_class& lo_ceil(std::uint64_t u, Mult m) const;
  const mpz_class& hi_floor(std::uint64_t u, Mult m) const;

  // Partition A_p = {u : delta_u = p}; M_p = 2^p.
  static std::uint64_t cell_of(std::uint64_t u);
  static std::uint64_t max_gap(std::uint64_t p);
  std::uint64_t u_min(std::uint64_t p) const;
  bool in_trimmed_cell(std::uint64_t u, std::uint64_t p) const;
  bool trimmed(std::uint64_t u) const { return in_trimmed_cell(u, cell_of(u)); }
  // Trimmed members of A_p not above ucap.
  std::vector<std::uint64_t> cell_scales(std::uint64_t p, std::uint64_t ucap) const;

  // b_p for any p >= 1. Table entries come from the greedy choice; beyond the
  // table the closed candidate (8p+1) 2^p is used unless it lands in a zone
  // around some I_u, in which case it is pushed past the zone.
  mpz_class b(std::uint64_t p) const;
  const std::vector<mpz_class>& b_table() const { return b_; }
  // p > table size whose b_p differs from (8p+1) 2^p, limited to zones u <= umax.
  const std::map<std::uint64_t, mpz_class>& b_exceptions() const { return b_exc_; }

  // Smallest b >= cand whose window [b - 8p, b + 4p] lies in a gap component.
  mpz_class fit_window(const mpz_class& cand, std::uint64_t p) const;
  bool window_fits(const mpz_class& b, std::uint64_t p, std::uint64_t* gap_u = nullptr) const;

  // E_p as a symbolic set: the trimmed scales of A_p up to umax.
  SymbolicSet symbolic_E(std::uint64_t p) const;

  nlohmann::json to_json() const;

 private:
  void build_bounds();
  void build_trim();
  void build_b();

  mpz_class a_sq_;
  mpq_class eps_;
  std::uint64_t umax_;
  std::uint64_t pmax_;
  std::uint64_t table_size_ = 0;
  // [u-1][mult index] for mults eps, 2eps, 4eps
  std::vector<std::array<mpz_class, 3>> lo_ceil_;
  std::vector<std::array<mpz_class, 3>> hi_floor_;
  std::vector<std::uint64_t> u_min_;  // index p-1, for p <= u_min_.size()
  std::vector<mpz_class> b_;          // index p-1
  std::map<std::uint64_t, mpz_class> b_exc_;
};

std::vector<mpz_class> choose_b(const CounterexampleModel& model, std::uint64_t pmax);

// Disjointness of the 4eps intervals and the difference containment, for all
// 1 <= v < u <= umax. Works on any parameters so infeasible ones can be examined.
CheckReport verify_interval_axioms(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t umax);
CheckReport verify_interval_axioms(const CounterexampleModel& model, std::uint64_t umax);

bool in_E(const CounterexampleModel& model, std::uint64_t p, const mpz_class& n);
// Scale u with n in I_u^eps, or 0 when there is none.
std::uint64_t eps_scale_of(const CounterexampleModel& model, const mpz_class& n);

struct NonFhcBound {
  mpq_class value;  // 6 [sum_{p<q<=Q} (8q+1)/b_q + 2^{-Q}]
  std::uint64_t Q = 0;
  double approx() const { return value.get_d(); }
};
NonFhcBound nonfhc_bound(const CounterexampleModel& model, std::uint64_t p);

// (a2^{-1} (1+eps)/(1-eps) - 1, a2^{-1} (1+4eps)/(1-4eps) - 1)
std::pair<mpq_class, mpq_class> vanish_exponents(const mpz_class& a_sq, const mpq_class& eps);
CheckReport vanish_terms_check(const mpz_class& a_sq, const mpq_class& eps, std::uint64_t p, std::uint64_t k_lo,
                               std::uint64_t k_hi);
CheckReport vanish_terms_check(const CounterexampleModel& model, std::uint64_t p, std::uint64_t k_lo,
                               std::uint64_t k_hi);

}  // namespace freqlab
