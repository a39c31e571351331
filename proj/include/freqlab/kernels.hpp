#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace freqlab {

enum class Exec { serial, parallel };

namespace kernels {

// Fixed chunk length for the parallel scans. Results depend on it but not on
// the thread count, so parallel output is reproducible bit for bit.
inline constexpr std::size_t kChunk = std::size_t{1} << 14;

// Sum of exp(log_w) split into members / non-members, kept relative to a
// running reference exponent with Neumaier compensation.
struct ScaledSum {
  double ref = -std::numeric_limits<double>::infinity();
  double in = 0.0, in_c = 0.0;
  double out = 0.0, out_c = 0.0;

  void add(double log_w, bool member) {
    if (log_w > ref) rescale(log_w);
    const double x = std::exp(log_w - ref);
    if (member)
      accumulate(in, in_c, x);
    else
      accumulate(out, out_c, x);
  }

  // Appends the sums of a later segment.
  void merge(const ScaledSum& later) {
    if (later.ref == -std::numeric_limits<double>::infinity()) return;
    if (later.ref > ref) rescale(later.ref);
    const double f = std::exp(later.ref - ref);
    accumulate(in, in_c, later.in * f);
    accumulate(in, in_c, later.in_c * f);
    accumulate(out, out_c, later.out * f);
    accumulate(out, out_c, later.out_c * f);
  }

  double in_value() const { return in + in_c; }
  double out_value() const { return out + out_c; }
  double total() const { return in_value() + out_value(); }
  double log_total() const { return ref + std::log(total()); }
  double log_in() const { return ref + std::log(in_value()); }
  double ratio_in() const { return in_value() / total(); }
  double ratio_out() const { return out_value() / total(); }

 private:
  void rescale(double new_ref) {
    const double f = std::exp(ref - new_ref);
    in *= f;
    in_c *= f;
    out *= f;
    out_c *= f;
    ref = new_ref;
  }

  static void accumulate(double& s, double& c, double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
};

struct RatioPoint {
  std::uint64_t n = 0;
  double ratio_in = 0.0;
  double ratio_out = 0.0;
  double log_total = 0.0;
};

// log_w[k-1] = ln alpha_k, mask[k-1] = membership of k (empty mask: nothing is a member).
// checkpoints ascending, each in [1, log_w.size()].
std::vector<RatioPoint> ratio_scan(std::span<const double> log_w, std::span<const std::uint8_t> mask,
                                   std::span<const std::uint64_t> checkpoints, Exec exec);

// out[n-1] = ln(sum_{j<=n} alpha_j).
std::vector<double> log_prefix(std::span<const double> log_w, Exec exec);

// In-place inclusive prefix sum.
void prefix_sum(std::vector<std::uint64_t>& v, Exec exec);

}  // namespace kernels
}  // namespace freqlab
