#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library, so agreement is a genuine cross-check.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

// Position of the first zero binary digit of k, counted from 1, by repeated division.
inline std::uint64_t first_zero(std::uint64_t k) {
  std::uint64_t pos = 1;
  while (k % 2 == 1) {
    k /= 2;
    ++pos;
  }
  return pos;
}

// n_1 = 2, n_k = n_{k-1} + g(delta_{k-1}) + g(delta_k).
inline std::vector<std::uint64_t> recurrence(std::uint64_t kmax, const std::function<std::uint64_t(std::uint64_t)>& g) {
  std::vector<std::uint64_t> n(kmax);
  n[0] = 2;
  for (std::uint64_t k = 2; k <= kmax; ++k) n[k - 1] = n[k - 2] + g(first_zero(k - 1)) + g(first_zero(k));
  return n;
}

inline std::vector<std::uint64_t> plain_sequence(std::uint64_t kmax) {
  return recurrence(kmax, [](std::uint64_t d) { return d; });
}

// f(j) = m on [a_m, a_{m+1}), by linear search.
inline std::uint64_t step_function(const std::vector<std::uint64_t>& a, std::uint64_t j) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] <= j) m = i + 1;
  return m;
}

// sum_{k <= n, member(k)} w(k) / sum_{k <= n} w(k) with w(k) = exp(log_w(k)), in 50-digit floats.
inline Big weighted_ratio(std::uint64_t n, const std::function<Big(std::uint64_t)>& log_w,
                          const std::function<bool(std::uint64_t)>& member) {
  Big in = 0, all = 0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    const Big w = exp(log_w(k));
    all += w;
    if (member(k)) in += w;
  }
  return in / all;
}

}  // namespace oracle
