#include "freqlab/kernels.hpp"

#include <algorithm>
#include <numeric>

#include <omp.h>

namespace freqlab::kernels {

namespace {

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

bool member(std::span<const std::uint8_t> mask, std::size_t i) {
  return !mask.empty() && mask[i] != 0;
}

RatioPoint snapshot(std::uint64_t n, const ScaledSum& s) {
  return {n, s.ratio_in(), s.ratio_out(), s.log_total()};
}

// Sums of each fixed-size chunk, then the exclusive prefix state for each chunk.
std::vector<ScaledSum> chunk_prefixes(std::span<const double> log_w, std::span<const std::uint8_t> mask) {
  const std::size_t nc = chunk_count(log_w.size());
  std::vector<ScaledSum> totals(nc);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(log_w.size(), lo + kChunk);
    ScaledSum s;
    for (std::size_t i = lo; i < hi; ++i) s.add(log_w[i], member(mask, i));
    totals[c] = s;
  }
  std::vector<ScaledSum> prefix(nc);
  ScaledSum run;
  for (std::size_t c = 0; c < nc; ++c) {
    prefix[c] = run;
    run.merge(totals[c]);
  }
  return prefix;
}

}  // namespace

std::vector<RatioPoint> ratio_scan(std::span<const double> log_w, std::span<const std::uint8_t> mask,
                                   std::span<const std::uint64_t> checkpoints, Exec exec) {
  std::vector<RatioPoint> out(checkpoints.size());
  if (checkpoints.empty()) return out;

  if (exec == Exec::serial) {
    ScaledSum s;
    std::size_t next = 0;
    for (std::size_t i = 0; i < log_w.size() && next < checkpoints.size(); ++i) {
      s.add(log_w[i], member(mask, i));
      while (next < checkpoints.size() && checkpoints[next] == i + 1) {
        out[next] = snapshot(i + 1, s);
        ++next;
      }
    }
    return out;
  }

  const std::size_t last = checkpoints.back();
  const auto head = log_w.first(last);
  const auto prefix = chunk_prefixes(head, mask.empty() ? mask : mask.first(last));
  const std::size_t nc = prefix.size();
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < nc; ++c) {
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t hi = std::min<std::uint64_t>(last, lo + kChunk);
    auto first = std::lower_bound(checkpoints.begin(), checkpoints.end(), lo + 1);
    if (first == checkpoints.end() || *first > hi) continue;
    ScaledSum s = prefix[c];
    std::size_t next = static_cast<std::size_t>(first - checkpoints.begin());
    for (std::uint64_t i = lo; i < hi && next < checkpoints.size(); ++i) {
      s.add(log_w[i], member(mask, i));
      while (next < checkpoints.size() && checkpoints[next] == i + 1) {
        out[next] = snapshot(i + 1, s);
        ++next;
      }
    }
  }
  return out;
}

std::vector<double> log_prefix(std::span<const double> log_w, Exec exec) {
  std::vector<double> out(log_w.size());
  if (exec == Exec::serial) {
    ScaledSum s;
    for (std::size_t i = 0; i < log_w.size(); ++i) {
      s.add(log_w[i], false);
      out[i] = s.log_total();
    }
    return out;
  }
  const auto prefix = chunk_prefixes(log_w, {});
  const std::size_t nc = prefix.size();
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(log_w.size(), lo + kChunk);
    ScaledSum s = prefix[c];
    for (std::size_t i = lo; i < hi; ++i) {
      s.add(log_w[i], false);
      out[i] = s.log_total();
    }
  }
  return out;
}

void prefix_sum(std::vector<std::uint64_t>& v, Exec exec) {
  if (exec == Exec::serial) {
    std::partial_sum(v.begin(), v.end(), v.begin());
    return;
  }
  const std::size_t nc = chunk_count(v.size());
  std::vector<std::uint64_t> sums(nc, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < nc; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(v.size(), lo + kChunk);
    std::partial_sum(v.begin() + lo, v.begin() + hi, v.begin() + lo);
    sums[c] = v[hi - 1];
  }
  std::exclusive_scan(sums.begin(), sums.end(), sums.begin(), std::uint64_t{0});
#pragma omp parallel for schedule(static)
  for (std::size_t c = 1; c < nc; ++c) {
    const std::size_t lo = c * kChunk;
    const std::size_t hi = std::min(v.size(), lo + kChunk);
    for (std::size_t i = lo; i < hi; ++i) v[i] += sums[c];
  }
}

}  // namespace freqlab::kernels
