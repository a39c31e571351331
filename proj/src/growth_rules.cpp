#include "freqlab/growth_rules.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr std::uint64_t kTowerGuard = std::uint64_t{1} << 20;
constexpr std::size_t kSubsample = 256;

double interpolate(const HGrid& g, double x) {
  const auto it = std::lower_bound(g.x.begin(), g.x.end(), x);
  if (it == g.x.end()) return NAN;
  const auto i = static_cast<std::size_t>(it - g.x.begin());
  if (*it == x) return g.h[i];
  if (i == 0) return NAN;
  const double t = (x - g.x[i - 1]) / (g.x[i] - g.x[i - 1]);
  return g.h[i - 1] + t * (g.h[i] - g.h[i - 1]);
}

double h_at(const HGrid& g, double x) {
  const double v = interpolate(g, x);
  if (!std::isnan(v)) return v;
  return g.exact ? g.exact(x) : NAN;
}

// About kSubsample indices spaced geometrically in x.
std::vector<std::size_t> log_subsample(const HGrid& g) {
  std::vector<std::size_t> idx;
  const double lo = std::log(std::max(g.x.front(), 1e-300)), hi = std::log(g.x.back());
  for (std::size_t i = 0; i < kSubsample; ++i) {
    const double target = std::exp(lo + (hi - lo) * static_cast<double>(i) / (kSubsample - 1));
    auto it = std::lower_bound(g.x.begin(), g.x.end(), target);
    if (it == g.x.end()) --it;
    const auto j = static_cast<std::size_t>(it - g.x.begin());
    if (idx.empty() || j > idx.back()) idx.push_back(j);
  }
  return idx;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] * (1 + 1e-12) + 1e-300) return false;
  return true;
}

}  // namespace

GrowthFunction tower_a(unsigned s, std::size_t mmax) {
  if (s < 2) throw DomainError("tower_a needs s >= 2");
  if (mmax == 0) throw DomainError("tower_a needs mmax >= 1");
  std::vector<std::uint64_t> a{1};
  for (std::size_t m = 2; m <= mmax; ++m) {
    std::uint64_t v = m;
    for (unsigned i = 1; i < s; ++i) {
      if (v > 20) throw ResourceError("tower term a_" + std::to_string(m) + " exceeds the guard 2^20");
      v = std::uint64_t{1} << v;
    }
    if (v > kTowerGuard) throw ResourceError("tower term a_" + std::to_string(m) + " exceeds the guard 2^20");
    a.push_back(v);
  }
  return GrowthFunction(std::move(a), "tower:" + std::to_string(s));
}

HGrid sample_h(const std::function<double(double)>& h, std::uint64_t x_lo, std::uint64_t x_hi) {
  if (x_lo >= x_hi) throw DomainError("grid needs x_lo < x_hi");
  HGrid g;
  g.exact = h;
  g.x.reserve(x_hi - x_lo + 1);
  for (std::uint64_t x = x_lo; x <= x_hi; ++x) {
    g.x.push_back(static_cast<double>(x));
    g.h.push_back(h(static_cast<double>(x)));
  }
  return g;
}

HGrid builtin_h(const std::string& name, std::uint64_t x_lo, std::uint64_t x_hi) {
  if (name == "sqrt-log") return sample_h([](double x) { return std::sqrt(std::log(x)); }, x_lo, x_hi);
  if (name == "loglog") return sample_h([](double x) { return std::log(std::log(x)); }, x_lo, x_hi);
  if (name == "log") return sample_h([](double x) { return std::log(x); }, x_lo, x_hi);
  throw DomainError("unknown h preset '" + name + "' (sqrt-log, loglog, log)");
}

HGrid read_h_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open h-grid file '" + path + "'");
  HGrid g;
  double x = 0, h = 0;
  while (in >> x >> h) {
    g.x.push_back(x);
    g.h.push_back(h);
  }
  if (!in.eof()) throw StructuralError("h-grid file '" + path + "' is not two numeric columns");
  return g;
}

AFromH a_from_h(const HGrid& g, std::size_t mmax) {
  if (g.x.size() < 4 || g.x.size() != g.h.size()) throw DomainError("h grid needs at least 4 (x, h) pairs");
  for (std::size_t i = 1; i < g.x.size(); ++i) {
    if (!(g.x[i] > g.x[i - 1])) throw DomainError("h grid abscissae must be strictly increasing");
    if (!(g.h[i] > g.h[i - 1]))
      throw DomainError("h is not strictly increasing on the grid (x = " + std::to_string(g.x[i]) + ")");
  }
  AFromH out;
  out.a.push_back(1);
  for (std::size_t n = 2; n <= mmax; ++n) {
    const auto it = std::lower_bound(g.h.begin(), g.h.end(), static_cast<double>(n));
    if (it == g.h.end()) break;
    auto x = static_cast<std::uint64_t>(std::ceil(g.x[static_cast<std::size_t>(it - g.h.begin())]));
    out.a.push_back(std::max(x, out.a.back() + 1));
  }

  auto& rep = out.validity;
  rep.name = "h validity on grid";
  rep.identity = "h increasing, h(x)=o(log(x)), x/h(log x) eventually increasing, h'(x)=o(h(x))";
  const auto idx = log_subsample(g);
  rep.cases = idx.size();
  rep.witness("h increasing: pass");

  std::vector<double> ratio;
  for (auto i : idx)
    if (g.x[i] > 1 && g.h[i] > 0) ratio.push_back(g.h[i] / std::log(g.x[i]));
  if (ratio.size() < 2 || !non_increasing(ratio) || !(ratio.back() <= 0.9 * ratio.front()))
    rep.fail("h(x)=o(log(x)): h/log x is not decreasing toward 0 on the grid");
  else
    rep.witness("h(x)=o(log(x)): ratio " + std::to_string(ratio.front()) + " -> " + std::to_string(ratio.back()));

  std::vector<double> gvals;
  for (auto i : idx) {
    const double x = g.x[i];
    if (x <= 1) continue;
    const double hl = h_at(g, std::log(x));
    if (std::isnan(hl) || hl <= 0) continue;
    gvals.push_back(x / hl);
  }
  if (gvals.size() < 4) {
    rep.witness("x/h(log x): not evaluable on this grid (log x outside the sampled range)");
  } else {
    bool inc = true;
    for (std::size_t i = gvals.size() / 2 + 1; i < gvals.size(); ++i)
      if (!(gvals[i] > gvals[i - 1])) inc = false;
    if (!inc)
      rep.fail("x/h(log x) is not increasing on the upper half of the grid");
    else
      rep.witness("x/h(log x) eventually increasing: pass on " + std::to_string(gvals.size()) + " points");
  }

  std::vector<double> dlog;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const auto i = idx[k - 1], j = idx[k];
    if (g.h[i] <= 0) continue;
    dlog.push_back((g.h[j] - g.h[i]) / (g.x[j] - g.x[i]) / g.h[i]);
  }
  if (dlog.size() < 2 || !non_increasing(dlog) || !(dlog.back() <= 0.9 * dlog.front()))
    rep.fail("h'(x)=o(h(x)): h'/h is not decreasing toward 0 on the grid");
  else
    rep.witness("h'(x)=o(h(x)): pass");
  rep.details["a"] = out.a;
  return out;
}

}  // namespace freqlab
