#include "freqlab/density.hpp"

#include <algorithm>
#include <cmath>

#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

std::uint64_t window_start_of(std::uint64_t horizon) { return std::max<std::uint64_t>(1, horizon / 10); }

// Fills running min/max over the tail window and the convergence flag.
void finish(DensityEstimate& est) {
  est.window_start = window_start_of(est.horizon);
  double lo = INFINITY, hi = -INFINITY;
  std::vector<double> mins;
  for (auto& p : est.trace) {
    if (p.checkpoint < est.window_start) continue;
    p.in_window = true;
    lo = std::min(lo, p.ratio);
    hi = std::max(hi, p.ratio);
    p.running_min = lo;
    p.running_max = hi;
    mins.push_back(lo);
  }
  est.running_min = lo;
  est.running_max = hi;
  est.final_ratio = est.trace.empty() ? 0.0 : est.trace.back().ratio;
  const std::size_t tail = std::min<std::size_t>(10, mins.size());
  const auto [mn, mx] = std::minmax_element(mins.end() - static_cast<std::ptrdiff_t>(tail), mins.end());
  est.converged = tail == 10 && (*mx - *mn) <= est.tolerance * std::max(std::fabs(*mx), 1e-300);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

DensityEstimate ratio_estimate(const WeightTable& table, std::span<const std::uint8_t> mask, std::uint64_t horizon,
                               Exec exec, std::vector<kernels::RatioPoint>* raw = nullptr) {
  DensityEstimate est;
  est.horizon = horizon;
  const auto cps = geometric_checkpoints(horizon);
  auto pts = kernels::ratio_scan(table.log_weights(), mask, cps, exec);
  for (const auto& p : pts) est.trace.push_back({p.n, clamp01(p.ratio_in)});
  if (raw) *raw = std::move(pts);
  finish(est);
  return est;
}

void require_cover(const IntegerSet& set, std::uint64_t horizon) {
  if (set.bound() < horizon)
    throw PreconditionError("set is explicit only up to " + std::to_string(set.bound()) + " < horizon " +
                            std::to_string(horizon));
}

}  // namespace

nlohmann::json DensityEstimate::summary_json() const {
  return {{"kind", kind},
          {"horizon", horizon},
          {"window", {window_start, horizon}},
          {"checkpoints", trace.size()},
          {"running_min", running_min},
          {"running_max", running_max},
          {"final_ratio", final_ratio},
          {"converged", converged},
          {"convergence_tolerance", tolerance},
          {"max_duality_defect", max_duality_defect},
          {"extra", extra}};
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, double ratio) {
  if (horizon == 0) throw DomainError("horizon must be >= 1");
  std::vector<std::uint64_t> out;
  std::uint64_t c = 1;
  while (c < horizon) {
    out.push_back(c);
    c = std::max(c + 1, static_cast<std::uint64_t>(std::ceil(ratio * static_cast<double>(c))));
  }
  out.push_back(horizon);
  return out;
}

DensityEstimate lower_density_estimate(const AdmissibleMatrix& m, const IntegerSet& set, std::uint64_t horizon,
                                       Exec exec) {
  require_cover(set, horizon);
  const WeightTable table(m, horizon, exec);
  auto est = ratio_estimate(table, set.mask().first(horizon), horizon, exec);
  est.kind = "lower";
  return est;
}

DensityEstimate upper_density_estimate(const AdmissibleMatrix& m, const IntegerSet& set, std::uint64_t horizon,
                                       Exec exec) {
  require_cover(set, horizon);
  const WeightTable table(m, horizon, exec);
  auto est = ratio_estimate(table, set.mask().first(horizon), horizon, exec);
  const auto comp = set.complement();
  const auto dual = ratio_estimate(table, comp.mask().first(horizon), horizon, exec);
  double worst = 0.0;
  for (std::size_t i = 0; i < est.trace.size(); ++i)
    worst = std::max(worst, std::fabs(est.trace[i].ratio - (1.0 - dual.trace[i].ratio)));
  est.max_duality_defect = worst;
  if (worst > kDualityTolerance)
    throw ConsistencyError("upper ratio differs from 1 - lower(complement) by " + std::to_string(worst));
  est.kind = "upper";
  return est;
}

nlohmann::json VanishingCheck::to_json() const {
  nlohmann::json t = nlohmann::json::array();
  for (const auto& [n, r] : trace) t.push_back({n, r});
  return {{"passed", passed}, {"verdict", verdict}, {"final_ratio", final_ratio}, {"trace", t}};
}

VanishingCheck vanishing_ratio_check(const AdmissibleMatrix& m, std::uint64_t horizon) {
  if (horizon < 10) throw DomainError("vanishing_ratio_check needs horizon >= 10");
  const WeightTable table(m, horizon);
  VanishingCheck out;
  const std::uint64_t start = window_start_of(horizon);
  for (auto n : geometric_checkpoints(horizon))
    if (n >= start) out.trace.emplace_back(n, std::exp(table.log_weight(n) - table.log_cumsum(n)));
  out.final_ratio = out.trace.back().second;

  bool decreasing = true;
  for (std::size_t i = 1; i < out.trace.size(); ++i)
    if (!(out.trace[i].second < out.trace[i - 1].second)) decreasing = false;
  const bool small = out.final_ratio < kVanishingTolerance;
  const bool decaying = out.final_ratio <= 0.99 * out.trace.front().second;
  out.passed = decreasing && (small || decaying);
  if (!decreasing)
    out.verdict = "ratio not strictly decreasing over the last decade";
  else if (small)
    out.verdict = "decreasing and below tolerance";
  else if (decaying)
    out.verdict = "decreasing with at least 1% decay per decade (above tolerance)";
  else
    out.verdict = "decreasing but stalled above tolerance";
  return out;
}

DensityEstimate seq_density_estimate(const AdmissibleMatrix& m, std::span<const std::uint64_t> seq, std::uint64_t K,
                                     Exec exec) {
  if (K == 0) throw DomainError("K must be >= 1");
  if (seq.size() < K) throw PreconditionError("sequence has fewer than K terms");
  for (std::size_t i = 0; i < K; ++i)
    if (seq[i] == 0 || (i > 0 && seq[i] <= seq[i - 1]))
      throw PreconditionError("sequence must be strictly increasing and positive");
  const std::uint64_t top = seq[K - 1];
  const auto vanish = vanishing_ratio_check(m, std::max<std::uint64_t>(top, 10));
  if (!vanish.passed)
    throw PreconditionError("sequence-density formula needs alpha_n / sum_{j<=n} alpha_j -> 0; " + vanish.verdict);

  const WeightTable table(m, top, exec);
  DensityEstimate est;
  est.kind = "sequence";
  est.horizon = K;
  const auto cps = geometric_checkpoints(K);
  kernels::ScaledSum num;
  std::size_t next = 0;
  for (std::uint64_t k = 1; k <= K && next < cps.size(); ++k) {
    num.add(table.log_weight(seq[k - 1]), true);
    if (cps[next] == k) {
      est.trace.push_back({k, clamp01(std::exp(num.log_in() - table.log_cumsum(seq[k - 1])))});
      ++next;
    }
  }
  finish(est);

  // Cross-check against the mask route at n_K.
  std::vector<std::uint8_t> mask(top, 0);
  for (std::size_t i = 0; i < K; ++i) mask[seq[i] - 1] = 1;
  const std::uint64_t last[] = {top};
  const auto pt = kernels::ratio_scan(table.log_weights(), mask, last, exec);
  const double via_set = pt.front().ratio_in;
  const double rel = std::fabs(est.final_ratio - via_set) / std::max(via_set, 1e-300);
  est.extra["range_set_ratio"] = via_set;
  est.extra["range_set_relative_gap"] = rel;
  est.extra["vanishing"] = vanish.verdict;
  if (rel > 0.05) throw ConsistencyError("sequence ratio disagrees with range-set ratio by more than 5%");
  return est;
}

nlohmann::json compare_families(const IntegerSet& set, std::uint64_t horizon) {
  nlohmann::json rows = nlohmann::json::array();
  for (const char* fam : {"cesaro", "log", "A1/2", "B1", "Dt2", "Bt2"}) {
    const auto m = parse_matrix(fam);
    const auto est = lower_density_estimate(m, set, horizon);
    rows.push_back({{"family", m.label()}, {"running_min", est.running_min}, {"running_max", est.running_max}});
  }
  return {{"set", set.label()}, {"horizon", horizon}, {"estimates", rows},
          {"note", "finite-horizon values; no ordering is asserted"}};
}

}  // namespace freqlab
