#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "freqlab/check_report.hpp"
#include "freqlab/weighted.hpp"

namespace freqlab {

// (1, a_2, ..., a_mmax) with a_m = 2^2^...^m (s-1 twos) for m >= 2; head coerced to a_1 = 1.
GrowthFunction tower_a(unsigned s, std::size_t mmax);

// Sampled h on an increasing grid; `exact` (if set) is used where the grid cannot reach,
// e.g. h(log x) for x near the top of the grid.
struct HGrid {
  std::vector<double> x;
  std::vector<double> h;
  std::function<double(double)> exact;
};

HGrid sample_h(const std::function<double(double)>& h, std::uint64_t x_lo, std::uint64_t x_hi);
// sqrt-log | loglog | log
HGrid builtin_h(const std::string& name, std::uint64_t x_lo, std::uint64_t x_hi);
// Two columns per line: x h(x).
HGrid read_h_grid(const std::string& path);

struct AFromH {
  std::vector<std::uint64_t> a;
  CheckReport validity;
};

// a_n = smallest grid x with h(x) >= n (forced strictly increasing, a_1 = 1) for n <= mmax,
// stopping early when h never reaches n on the grid.
AFromH a_from_h(const HGrid& grid, std::size_t mmax);

}  // namespace freqlab
