#include "freqlab/weights.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr std::uint64_t kMaxFilterCandidates = std::uint64_t{1} << 16;

std::int64_t ramp(std::int64_t height, const mpz_class& dist) {
  if (dist >= height) return 0;
  return height - dist.get_si();
}

mpz_class dist_to(const mpz_class& n, const mpz_class& lo, const mpz_class& hi) {
  if (n < lo) return lo - n;
  if (n > hi) return n - hi;
  return 0;
}

// Decimal for small n, bit length otherwise (interval-scale integers run to 10^5 digits).
std::string describe(const mpz_class& n) {
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  if (bits <= 128) return to_string(n);
  return std::to_string(bits) + "-bit integer ending ..." + to_string(mpz_class(n % 1000000));
}

void offer(LayerHit& best, const LayerHit& cand) {
  if (cand.value > best.value || (cand.value == best.value && cand.on_plateau && !best.on_plateau)) best = cand;
}

}  // namespace

const char* layer_name(LayerKind k) {
  switch (k) {
    case LayerKind::none: return "none";
    case LayerKind::period: return "period";
    case LayerKind::scale: return "scale";
    case LayerKind::pair: return "pair";
  }
  return "none";
}

std::int64_t period_layer_value(const mpz_class& n, const mpz_class& b, std::uint64_t p) {
  const std::int64_t h = static_cast<std::int64_t>(p);
  if (mpz_fits_ulong_p(b.get_mpz_t()) && n >= b) {
    const unsigned long bb = mpz_get_ui(b.get_mpz_t());
    const unsigned long r = mpz_fdiv_ui(n.get_mpz_t(), bb);
    const unsigned long d = std::min(r, bb - r);
    if (d >= 3 * p) return 0;
    return std::min(h, 3 * h - static_cast<std::int64_t>(d));
  }
  mpz_class dist;
  if (n < b) {
    dist = b - n;
  } else {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), b.get_mpz_t());
    dist = std::min(r, mpz_class(b - r));
  }
  if (dist >= 3 * h) return 0;
  return std::min(h, 3 * h - dist.get_si());
}

WeightRealization::WeightRealization(const CounterexampleModel& model)
    : model_(&model), cap_(model.interval(model.umax() + 1, Mult::eps4).lo()) {
  const std::uint64_t umax = model.umax();
  plateaus_.resize(umax);
  for (std::uint64_t u = 1; u <= umax; ++u) {
    if (!model.trimmed(u)) continue;
    const std::uint64_t pu = CounterexampleModel::cell_of(u);
    const mpz_class& lo4 = model.lo_ceil(u, Mult::eps4);
    const mpz_class& hi4 = model.hi_floor(u, Mult::eps4);
    auto add = [&](Plateau pl, const std::string& what) {
      const std::int64_t h = pl.height;
      if (pl.lo - (h - 1) < lo4 || pl.hi + (h - 1) > hi4)
        throw ConsistencyError("ramp of the " + what + " layer leaves I_u^{4eps} at u = " + std::to_string(u));
      plateaus_[u - 1].push_back(std::move(pl));
    };
    const mpz_class& lo1 = model.lo_ceil(u, Mult::eps);
    const mpz_class& hi1 = model.hi_floor(u, Mult::eps);
    add({lo1, hi1 + to_mpz(pu), static_cast<std::int64_t>(u), u, 0}, "scale");
    for (std::uint64_t v = 1; v < u; ++v) {
      if (!model.trimmed(v)) continue;
      const std::uint64_t pv = CounterexampleModel::cell_of(v);
      add({lo1 - model.hi_floor(v, Mult::eps), hi1 - model.lo_ceil(v, Mult::eps) + to_mpz(pu),
           static_cast<std::int64_t>(std::max(pu, pv)), u, v},
          "pair");
    }
  }
}

const std::vector<WeightRealization::Plateau>& WeightRealization::plateaus(std::uint64_t u) const {
  if (u == 0 || u > plateaus_.size()) throw CoverageError("scale outside the realization");
  return plateaus_[u - 1];
}

void WeightRealization::period_layers(const mpz_class& n, LayerHit& best) const {
  const auto& table = model_->b_table();
  const std::uint64_t T = table.size();
  for (std::uint64_t p = 1; p <= T; ++p) {
    const std::int64_t v = period_layer_value(n, table[p - 1], p);
    if (v > 0) offer(best, {LayerKind::period, v, p, 0, 0, v == static_cast<std::int64_t>(p)});
  }
  const std::uint64_t bl = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (const auto& [p, b] : model_->b_exceptions()) {
    if (p > bl + 1) break;
    const std::int64_t v = period_layer_value(n, b, p);
    if (v > 0) offer(best, {LayerKind::period, v, p, 0, 0, v == static_cast<std::int64_t>(p)});
  }
  if (bl <= T) return;
  // Past the table b_p = (8p+1) 2^p. Being within 3p of a multiple forces bits
  // [B, p) of n to be constant, where 2^B > 3p for every p considered.
  const unsigned B = static_cast<unsigned>(std::bit_width(3 * (bl + 2)));
  const std::uint64_t s1 = mpz_scan1(n.get_mpz_t(), B);
  const std::uint64_t s0 = mpz_scan0(n.get_mpz_t(), B);
  const std::uint64_t hi = std::min<std::uint64_t>(std::max(s0, s1), bl);
  if (hi <= T) return;
  if (hi - T > kMaxFilterCandidates) throw ResourceError("too many period-layer candidates for n");
  const std::uint64_t low = mpz_fdiv_ui(n.get_mpz_t(), 1UL << B);
  const std::uint64_t top = std::uint64_t{1} << B;
  mpz_class H;
  for (std::uint64_t p = T + 1; p <= hi; ++p) {
    if (model_->b_exceptions().count(p)) continue;
    const bool zeros = p <= s1;
    const bool ones = p <= s0;
    mpz_tdiv_q_2exp(H.get_mpz_t(), n.get_mpz_t(), p);
    const std::uint64_t m = 8 * p + 1;
    const std::uint64_t hm = mpz_fdiv_ui(H.get_mpz_t(), m);
    const bool below = mpz_cmp_ui(H.get_mpz_t(), m) < 0;  // n < b_p
    std::uint64_t dist = std::numeric_limits<std::uint64_t>::max();
    if (zeros && hm == 0 && !below) dist = low;
    if (ones && hm == 8 * p) dist = std::min(dist, top - low);
    if (dist >= 3 * p) continue;
    const std::int64_t h = static_cast<std::int64_t>(p);
    const std::int64_t v = std::min<std::int64_t>(h, 3 * h - static_cast<std::int64_t>(dist));
    offer(best, {LayerKind::period, v, p, 0, 0, v == h});
  }
}

ProductValue WeightRealization::eval(const mpz_class& n) const {
  if (sgn(n) <= 0) throw PreconditionError("log2_product expects n >= 1");
  if (cap_.compare(n) >= 0) throw ResourceError("n beyond the 4eps interval of scale umax + 1");
  ProductValue out;
  LayerHit best;
  period_layers(n, best);
  for (std::uint64_t u = 1; u <= model_->umax(); ++u) {
    if (n < model_->lo_ceil(u, Mult::eps4)) break;
    if (n > model_->hi_floor(u, Mult::eps4)) continue;
    out.scale = u;
    for (const Plateau& pl : plateaus_[u - 1]) {
      const mpz_class d = dist_to(n, pl.lo, pl.hi);
      const std::int64_t v = ramp(pl.height, d);
      if (v > 0) offer(best, {pl.v == 0 ? LayerKind::scale : LayerKind::pair, v, 0, pl.u, pl.v, sgn(d) == 0});
    }
    break;
  }
  out.top = best;
  out.log2 = best.value;
  return out;
}

nlohmann::json WeightRealization::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < plateaus_.size(); ++i) {
    for (const Plateau& pl : plateaus_[i]) {
      j.push_back({{"layer", pl.v == 0 ? "scale" : "pair"},
                   {"u", pl.u},
                   {"v", pl.v},
                   {"height", pl.height},
                   {"plateau_lo_bits", mpz_sizeinbase(pl.lo.get_mpz_t(), 2)},
                   {"plateau_hi_bits", mpz_sizeinbase(pl.hi.get_mpz_t(), 2)}});
    }
  }
  return {{"ramps", "slope 1, adjacent to each plateau"},
          {"period_layer", "height p on b_p N + [-2p, 2p], zero from distance 3p"},
          {"plateaus", j}};
}

mpq_class log2_product(const CounterexampleModel& model, const mpz_class& n) {
  return mpq_class(WeightRealization(model).log2_product(n));
}

CheckReport max_slope_lemma_check(std::uint64_t trials, std::uint64_t seed) {
  CheckReport r;
  r.name = "max_slope_lemma";
  r.identity = "|f_i(n) - f_i(n-1)| <= 1 for all i implies |max_i f_i(n) - max_i f_i(n-1)| <= 1";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> step(-1, 1);
  std::uniform_int_distribution<int> count(2, 6);
  std::uniform_int_distribution<int> start(-5, 5);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int k = count(rng);
    std::vector<long> f(k);
    for (long& x : f) x = start(rng);
    long prev = *std::max_element(f.begin(), f.end());
    for (int n = 1; n <= 200; ++n) {
      for (long& x : f) x += step(rng);
      const long cur = *std::max_element(f.begin(), f.end());
      ++r.cases;
      if (std::labs(cur - prev) > 1) r.fail("trial " + std::to_string(t) + " step " + std::to_string(n));
      prev = cur;
    }
  }
  return r;
}

CheckReport verify_weight_feasibility(const CounterexampleModel& model, std::uint64_t umax, std::uint64_t samples,
                                      std::uint64_t seed) {
  if (umax < 2) throw PreconditionError("umax must be at least 2");
  if (umax > model.umax()) throw CoverageError("umax exceeds the model's scale cap");

  CheckReport contain;
  contain.name = "ramp_containments";
  contain.identity =
      "2^{(1-4eps)a2^u} + u <= 2^{(1-eps)a2^u}; I_u^eps + [0,2u] inside I_u^{4eps}; "
      "I_u^eps - I_v^eps + [0,p] - [0,max(p,q)] inside I_u^{2eps} - I_v^{2eps} inside I_u^{4eps}";
  for (std::uint64_t u = 1; u <= umax; ++u) {
    if (!model.trimmed(u)) continue;
    const std::uint64_t pu = CounterexampleModel::cell_of(u);
    const ExpInterval I1 = model.interval(u, Mult::eps);
    const ExpInterval I4 = model.interval(u, Mult::eps4);
    const std::string at = " at u = " + std::to_string(u);
    ++contain.cases;
    if (!exp_diff_at_least(I1.lo(), I4.lo(), to_mpz(u))) contain.fail("rise room 2^{lo4} + u <= 2^{lo1} fails" + at);
    if (model.lo_ceil(u, Mult::eps) - to_mpz(u - 1) < model.lo_ceil(u, Mult::eps4))
      contain.fail("scale ramp starts below I_u^{4eps}" + at);
    ++contain.cases;
    if (pu > u) contain.fail("p_u > u" + at);
    if (!exp_diff_at_least(I4.hi(), I1.hi(), to_mpz(2 * u))) contain.fail("fall room 2^{hi1} + 2u <= 2^{hi4} fails" + at);
    if (model.hi_floor(u, Mult::eps) + to_mpz(pu + u - 1) > model.hi_floor(u, Mult::eps4))
      contain.fail("scale ramp ends above I_u^{4eps}" + at);
    for (std::uint64_t v = 1; v < u; ++v) {
      if (!model.trimmed(v)) continue;
      const std::uint64_t pv = CounterexampleModel::cell_of(v);
      const std::uint64_t h = std::max(pu, pv);
      const std::string uv = " at (u,v) = (" + std::to_string(u) + "," + std::to_string(v) + ")";
      const mpz_class A = model.lo_ceil(u, Mult::eps) - model.hi_floor(v, Mult::eps);
      const mpz_class Bp = model.hi_floor(u, Mult::eps) - model.lo_ceil(v, Mult::eps) + to_mpz(pu);
      const mpz_class lo2 = model.lo_ceil(u, Mult::eps2) - model.hi_floor(v, Mult::eps2);
      const mpz_class hi2 = model.hi_floor(u, Mult::eps2) - model.lo_ceil(v, Mult::eps2);
      ++contain.cases;
      if (A - to_mpz(h - 1) < lo2 || Bp + to_mpz(h - 1) > hi2) contain.fail("pair ramp leaves I_u^{2eps} - I_v^{2eps}" + uv);
      if (lo2 < model.lo_ceil(u, Mult::eps4) || hi2 > model.hi_floor(u, Mult::eps4))
        contain.fail("I_u^{2eps} - I_v^{2eps} leaves I_u^{4eps}" + uv);
    }
  }
  if (!contain.passed) return combine("weight_feasibility", {contain});

  const WeightRealization w(model);

  // sample points: plateau edges first, then period windows and random points per scale
  std::vector<mpz_class> pts;
  std::vector<std::uint64_t> scales;
  for (std::uint64_t u = 1; u <= umax; ++u)
    if (model.trimmed(u)) scales.push_back(u);
  for (std::uint64_t u : scales) {
    for (const auto& pl : w.plateaus(u)) {
      for (std::int64_t d = -pl.height - 1; d <= 1; ++d) {
        pts.push_back(pl.lo + d);
        pts.push_back(pl.hi - d);
      }
    }
  }
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(seed);
  const std::uint64_t target = std::max<std::uint64_t>(samples, pts.size());
  std::uint64_t i = 0;
  while (pts.size() < target) {
    const std::uint64_t u = scales[i % scales.size()];
    const mpz_class& lo4 = model.lo_ceil(u, Mult::eps4);
    const mpz_class& hi4 = model.hi_floor(u, Mult::eps4);
    mpz_class n = lo4 + rng.get_z_range(hi4 - lo4 + 1);
    if (i % 2 == 1) {
      // land near a multiple of some small-period b_p
      const std::uint64_t p = 1 + (i / 2) % 8;
      const mpz_class bp = model.b(p);
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), bp.get_mpz_t());
      n = q * bp + static_cast<long>((i / 16) % (8 * p + 1)) - static_cast<long>(4 * p);
    }
    pts.push_back(n);
    ++i;
  }

  CheckReport slope;
  slope.name = "slope_bound";
  slope.identity = "|log2(w_1...w_n) - log2(w_1...w_{n-1})| <= 1";
  CheckReport plateau;
  plateau.name = "plateau_values";
  plateau.identity = "log2 product is at least the plateau height on every plateau point";
  std::vector<ProductValue> cur(pts.size());
  std::vector<ProductValue> prev(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t k = 0; k < pts.size(); ++k) {
    cur[k] = w.eval(pts[k]);
    prev[k] = w.eval(pts[k] - 1);
  }
  std::uint64_t plateau_points = 0;
  std::uint64_t excess_plateau = 0;
  std::uint64_t excess_ramp = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    ++slope.cases;
    const std::int64_t d = cur[k].log2 - prev[k].log2;
    if (d > 1 || d < -1) slope.fail("n = " + describe(pts[k]) + ": jump " + std::to_string(d));
    const std::uint64_t u = cur[k].scale;
    if (u == 0 || !model.trimmed(u)) continue;
    for (const auto& pl : w.plateaus(u)) {
      if (pts[k] < pl.lo || pts[k] > pl.hi) continue;
      ++plateau_points;
      ++plateau.cases;
      if (cur[k].log2 < pl.height) {
        plateau.fail("n = " + describe(pts[k]) + " below plateau height " + std::to_string(pl.height));
      } else if (cur[k].log2 > pl.height) {
        // another layer is higher here; a period ramp may exceed a low plateau
        if (cur[k].top.on_plateau) ++excess_plateau;
        else ++excess_ramp;
      }
    }
  }
  slope.details["pairs"] = pts.size();
  plateau.details["plateau_points"] = plateau_points;
  plateau.details["excess_via_plateau"] = excess_plateau;
  plateau.details["excess_via_ramp"] = excess_ramp;

  CheckReport lemma = max_slope_lemma_check(200, seed);
  CheckReport out = combine("weight_feasibility", {contain, slope, plateau, lemma});
  out.details["realization"] = w.to_json();
  return out;
}

}  // namespace freqlab
