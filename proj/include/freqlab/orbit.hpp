#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqlab/check_report.hpp"
#include "freqlab/integer_set.hpp"

namespace freqlab {

struct OrbitResult {
  std::vector<std::uint64_t> hits;  // steps n in [1, steps] with the iterate inside the ball
  std::vector<double> distance;     // sup-distance to the target after each step
  std::uint64_t steps = 0;

  IntegerSet hitting_set() const { return IntegerSet::from_sorted(hits, steps, "hitting set"); }
};

// Weighted backward shift on a truncation of dimension x.size(): after each step
// coordinate i holds w_{i+1} times the old coordinate i+1 and the last coordinate
// becomes 0. weights[k-1] = w_k; entries must lie in [1/2, 2].
OrbitResult finite_orbit_sim(const std::vector<double>& weights, std::vector<double> x, std::uint64_t steps,
                             const std::vector<double>& target, double radius);

// Constant weights for the named preset: rolewicz (w = 2) or pure-shift (w = 1).
std::vector<double> weight_preset(const std::string& name, std::size_t dim);

// Largest gap between consecutive elements up to each horizon (counting the gap
// from 0 to the first element) next to the A_1 lower estimate at that horizon.
CheckReport a1_gap_diagnostic(const IntegerSet& set, const std::vector<std::uint64_t>& horizons);

}  // namespace freqlab
