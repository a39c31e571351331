#include "freqlab/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "freqlab/density.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/matrix.hpp"

namespace freqlab {

OrbitResult finite_orbit_sim(const std::vector<double>& weights, std::vector<double> x, std::uint64_t steps,
                             const std::vector<double>& target, double radius) {
  const std::size_t dim = x.size();
  if (dim == 0) throw PreconditionError("dimension must be at least 1");
  if (steps == 0) throw PreconditionError("steps must be at least 1");
  if (weights.size() + 1 < dim) throw PreconditionError("need weights w_1 .. w_{dim-1}");
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.5 || w > 2.0) throw DomainError("weights must lie in [1/2, 2]");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("initial vector must be finite");
  for (double v : target)
    if (!std::isfinite(v)) throw DomainError("target must be finite");
  if (!(radius >= 0.0)) throw DomainError("radius must be non-negative");

  OrbitResult out;
  out.steps = steps;
  out.distance.reserve(steps);
  for (std::uint64_t n = 1; n <= steps; ++n) {
    for (std::size_t i = 0; i + 1 < dim; ++i) x[i] = weights[i] * x[i + 1];
    x[dim - 1] = 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < std::max(dim, target.size()); ++i) {
      const double xi = i < dim ? x[i] : 0.0;
      const double ti = i < target.size() ? target[i] : 0.0;
      d = std::max(d, std::fabs(xi - ti));
    }
    out.distance.push_back(d);
    if (d <= radius) out.hits.push_back(n);
  }
  return out;
}

std::vector<double> weight_preset(const std::string& name, std::size_t dim) {
  const std::size_t n = dim > 0 ? dim - 1 : 0;
  if (name == "rolewicz") return std::vector<double>(n, 2.0);
  if (name == "pure-shift") return std::vector<double>(n, 1.0);
  throw DomainError("unknown weight preset '" + name + "'");
}

CheckReport a1_gap_diagnostic(const IntegerSet& set, const std::vector<std::uint64_t>& horizons) {
  if (horizons.empty()) throw PreconditionError("no horizons given");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) throw PreconditionError("horizons must be increasing");
  if (horizons.front() < 10) throw PreconditionError("horizons start at 10");
  if (horizons.back() > set.bound()) throw CoverageError("set does not cover the last horizon");

  CheckReport r;
  r.name = "a1_gap_diagnostic";
  r.identity = "growing gaps force the A_1 lower estimate towards 0";
  const AdmissibleMatrix a1 = make_matrix(MatrixFamily::a_r, 1);
  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::uint64_t> gaps;
  std::vector<double> est;
  for (std::uint64_t H : horizons) {
    std::uint64_t last = 0;
    std::uint64_t gap = 0;
    for (std::uint64_t k = 1; k <= H; ++k) {
      if (!set.contains(k)) continue;
      gap = std::max(gap, k - last);
      last = k;
    }
    if (last == 0) gap = H;
    const double value = lower_density_estimate(a1, set, H).running_min;
    gaps.push_back(gap);
    est.push_back(value);
    rows.push_back({{"horizon", H}, {"max_gap", gap}, {"a1_lower_estimate", value}});
    ++r.cases;
  }
  const bool growing = gaps.back() > gaps.front();
  if (growing) {
    for (std::size_t i = 1; i < est.size(); ++i)
      if (est[i] > est[i - 1]) r.fail("estimate rises at horizon " + std::to_string(horizons[i]) + " while gaps grow");
    if (est.size() > 1 && !(est.back() < est.front())) r.fail("estimate does not decrease while gaps grow");
  }
  r.details["rows"] = rows;
  r.details["gaps_growing"] = growing;
  return r;
}

}  // namespace freqlab
