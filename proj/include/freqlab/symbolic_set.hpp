#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include <json.hpp>

#include "freqlab/exp_rational.hpp"

namespace freqlab {

// {b t : t >= 1} intersected with [2^{lo}, 2^{hi}].
struct SymbolicComponent {
  mpz_class period;
  ExpRational lo;
  ExpRational hi;
};

// Finite union of components, sorted by interval, plus the left endpoint of
// the first component beyond the materialized ones (needed to normalize the last).
struct SymbolicSet {
  std::vector<SymbolicComponent> components;
  std::optional<ExpRational> next_lo;
};

struct ComponentBound {
  double lower = 0.0;   // bounds on (sum_{j in [c,d], b | j} 1/j) / ln(c_next)
  double upper = 0.0;
  bool spec_branch = true;  // false when c < 2b and the integral bracket was used
};

struct SymbolicBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<ComponentBound> per_component;
  nlohmann::json to_json() const;
};

// Brackets the logarithmic-density liminf of the set. Each component with a known
// successor contributes harmonic mass / ln(next left endpoint); the result is the
// minimum over the first p_horizon such components (0 = all).
SymbolicBounds symbolic_log_density_bounds(const SymbolicSet& set, std::size_t p_horizon = 0);

// Bounds on sum_{j in [c,d], b | j} 1/j, without the normalization.
std::pair<double, double> harmonic_mass_bounds(const mpz_class& b, const ExpRational& c, const ExpRational& d,
                                               bool* spec_branch = nullptr);

}  // namespace freqlab
