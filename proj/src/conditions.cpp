#include "freqlab/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/symbolic_set.hpp"

namespace freqlab {

namespace {

// Relative slack allowed between the symbolic bound and the closed form in (a).
constexpr double kClosedBoundRel = 1e-12;

std::string idx(std::size_t i) { return "#" + std::to_string(i); }

}  // namespace

mpz_class M_of(std::uint64_t p) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), pow2(p).get_mpz_t());
  return r;
}

std::vector<ESample> sample_E(const CounterexampleModel& model, std::uint64_t p, std::uint64_t per_scale,
                              std::uint64_t seed) {
  if (per_scale < 2) throw PreconditionError("need at least two samples per scale");
  std::vector<ESample> out;
  const mpz_class b = model.b(p);
  for (std::uint64_t u : model.cell_scales(p, model.umax())) {
    mpz_class t_lo;
    mpz_class t_hi;
    mpz_cdiv_q(t_lo.get_mpz_t(), model.lo_ceil(u, Mult::eps).get_mpz_t(), b.get_mpz_t());
    mpz_fdiv_q(t_hi.get_mpz_t(), model.hi_floor(u, Mult::eps).get_mpz_t(), b.get_mpz_t());
    if (t_lo > t_hi) continue;
    std::vector<mpz_class> ts = {t_lo, t_hi};
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(seed * 1000003 + p * 1009 + u);
    const mpz_class span = t_hi - t_lo + 1;
    for (std::uint64_t guard = 0; ts.size() < per_scale && guard < 16 * per_scale; ++guard) {
      mpz_class t = t_lo + rng.get_z_range(span);
      if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (const auto& t : ts) out.push_back({p, u, t * b});
  }
  return out;
}

nlohmann::json HittingReport::to_json() const {
  nlohmann::json nf = nlohmann::json::array();
  for (const auto& [p, bnd] : nonfhc)
    nf.push_back({{"p", p}, {"bound", to_string(bnd.value)}, {"approx", bnd.approx()}, {"Q", bnd.Q}});
  nlohmann::json smp = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.size(); ++i)
    smp.push_back({{"index", i}, {"p", samples[i].p}, {"u", samples[i].u}, {"n", to_string(samples[i].n)}});
  return {{"passed", passed()},
          {"a", a.to_json()},
          {"b", b.to_json()},
          {"c", c.to_json()},
          {"d", d.to_json()},
          {"min_margin_d", min_margin_d},
          {"nonfhc_bound", nf},
          {"samples", smp}};
}

HittingReport verify_conditions_abcd(const CounterexampleModel& model, std::uint64_t pmax,
                                     std::uint64_t samples_per_scale, std::uint64_t seed) {
  if (pmax == 0) throw PreconditionError("pmax must be at least 1");
  HittingReport rep;
  const WeightRealization w(model);
  const double eps = model.eps().get_d();
  const double ln_a2 = std::log(model.a_sq().get_d());

  rep.a.name = "condition_a";
  rep.a.identity = "lower log density of E_p >= 2 eps / (b_p (1-eps) a^{2 M_p}) > 0";
  nlohmann::json per_p = nlohmann::json::array();
  for (std::uint64_t p = 1; p <= pmax; ++p) {
    ++rep.a.cases;
    const SymbolicSet sym = model.symbolic_E(p);
    if (sym.components.empty()) {
      rep.a.fail("p = " + std::to_string(p) + ": no trimmed scale up to umax");
      continue;
    }
    const SymbolicBounds bnd = symbolic_log_density_bounds(sym);
    const double ln_closed = std::log(2.0 * eps / (1.0 - eps)) - ln_mpz(model.b(p)) -
                             static_cast<double>(CounterexampleModel::max_gap(p)) * ln_a2;
    const double closed = std::exp(ln_closed);
    const bool ok = bnd.lower > 0.0 && bnd.lower >= closed * (1.0 - kClosedBoundRel);
    per_p.push_back({{"p", p}, {"symbolic_lower", bnd.lower}, {"symbolic_upper", bnd.upper},
                     {"closed_bound", closed}, {"ln_closed_bound", ln_closed}, {"ok", ok}});
    if (!ok) rep.a.fail("p = " + std::to_string(p) + ": symbolic lower bound below the closed form");
  }
  rep.a.details["per_p"] = per_p;

  for (std::uint64_t p = 1; p <= pmax; ++p) {
    auto s = sample_E(model, p, samples_per_scale, seed);
    rep.samples.insert(rep.samples.end(), s.begin(), s.end());
  }
  const auto& S = rep.samples;

  rep.b.name = "condition_b";
  rep.b.identity = "n in E_p, m in E_q, n != m  =>  |n - m| > max(p, q)";
  std::uint64_t cross = 0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (!in_E(model, S[i].p, S[i].n)) rep.b.fail("sample " + idx(i) + " is not in E_p");
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      if (S[i].n == S[j].n) continue;
      ++rep.b.cases;
      if (S[i].p != S[j].p) ++cross;
      const mpz_class gap = abs(S[i].n - S[j].n);
      if (gap <= to_mpz(std::max(S[i].p, S[j].p))) rep.b.fail("pair " + idx(i) + ", " + idx(j));
    }
  }
  rep.b.details["cross_pairs"] = cross;

  rep.c.name = "condition_c";
  rep.c.identity = "log2(w_1...w_{n+t}) >= u for n in E_p at scale u, t in [0, p]";
  std::map<std::uint64_t, std::int64_t> min_per_scale;
  std::uint64_t excess_plateau = 0;
  std::uint64_t excess_ramp = 0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const std::uint64_t p = S[i].p;
    for (std::uint64_t t : {std::uint64_t{0}, p / 2, p}) {
      ++rep.c.cases;
      const ProductValue pv = w.eval(S[i].n + to_mpz(t));
      const std::int64_t u = static_cast<std::int64_t>(S[i].u);
      auto [it, fresh] = min_per_scale.emplace(S[i].u, pv.log2);
      if (!fresh) it->second = std::min(it->second, pv.log2);
      if (pv.log2 < u) {
        rep.c.fail("sample " + idx(i) + " t = " + std::to_string(t) + ": " + std::to_string(pv.log2) + " < u");
      } else if (pv.log2 > u) {
        if (pv.top.on_plateau) ++excess_plateau;
        else ++excess_ramp;
      }
    }
  }
  nlohmann::json mins = nlohmann::json::object();
  std::int64_t last = -1;
  for (const auto& [u, v] : min_per_scale) {
    mins[std::to_string(u)] = v;
    if (v <= last) rep.c.fail("minimum product not increasing with the scale at u = " + std::to_string(u));
    last = v;
  }
  rep.c.details["min_log2_per_scale"] = mins;
  rep.c.details["excess_via_plateau"] = excess_plateau;
  rep.c.details["excess_via_ramp"] = excess_ramp;

  rep.d.name = "condition_d";
  rep.d.identity = "w_1...w_{m-n+t} >= M(p) M(q) with M(p) = floor(2^{p/2}), n in E_p < m in E_q, t in [0, q]";
  struct Quad {
    std::size_t i, j;
    std::uint64_t t;
  };
  std::vector<Quad> quads;
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t j = 0; j < S.size(); ++j) {
      if (!(S[j].n > S[i].n)) continue;
      const std::uint64_t q = S[j].p;
      for (std::uint64_t t : {std::uint64_t{0}, q / 2, q}) quads.push_back({i, j, t});
    }
  }
  std::vector<std::int64_t> vals(quads.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const Quad& qd = quads[k];
    vals[k] = w.log2_product(S[qd.j].n - S[qd.i].n + to_mpz(qd.t));
  }
  double min_margin = std::numeric_limits<double>::infinity();
  nlohmann::json margin_pq = nlohmann::json::object();
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const Quad& qd = quads[k];
    const std::uint64_t p = S[qd.i].p;
    const std::uint64_t q = S[qd.j].p;
    const mpz_class MM = M_of(p) * M_of(q);
    ++rep.d.cases;
    const std::string wit = "n = " + idx(qd.i) + ", m = " + idx(qd.j) + ", t = " + std::to_string(qd.t) +
                            ", log2 = " + std::to_string(vals[k]);
    if (vals[k] < 0 || pow2(static_cast<unsigned long>(vals[k])) < MM) rep.d.fail(wit + " below M(p)M(q)");
    if (2 * vals[k] < static_cast<std::int64_t>(p + q)) rep.d.fail(wit + " below (p+q)/2");
    const double margin = static_cast<double>(vals[k]) - log2_mpz(MM);
    min_margin = std::min(min_margin, margin);
    const std::string key = std::to_string(p) + "," + std::to_string(q);
    if (!margin_pq.contains(key) || margin_pq[key].get<double>() > margin) margin_pq[key] = margin;
    if (rep.d.witnesses.size() < 16) rep.d.witness(wit);
  }
  rep.min_margin_d = quads.empty() ? 0.0 : min_margin;
  rep.d.details["min_margin"] = rep.min_margin_d;
  rep.d.details["min_margin_by_pq"] = margin_pq;
  if (quads.empty()) rep.d.fail("no sampled pairs");

  for (std::uint64_t p = 1; p <= pmax; ++p) rep.nonfhc.emplace_back(p, nonfhc_bound(model, p));
  return rep;
}

}  // namespace freqlab
