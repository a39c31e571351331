#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "freqlab/check_report.hpp"
#include "freqlab/weighted.hpp"

namespace freqlab {

struct EnvelopeFit {
  mpq_class S_partial;   // sum_{i <= K} 2^{-(a_i - 1)}, exact
  mpq_class tail_bound;  // certified: S - S_partial <= tail_bound
  double C = 0.0;        // |n_N - 2 S N| <= C l_N + C'
  double C_prime = 0.0;
  double min_residual = 0.0;
  double max_residual = 0.0;
  std::uint64_t sign_changes = 0;
  CheckReport report;
};

// Fits the smallest (C, C') >= 0, minimizing sum over observed l of (C l + C'),
// such that |n_N - 2SN| <= C l_N + C' for every N <= Nmax. Residuals are
// widened by the certified tail of S before fitting.
EnvelopeFit envelope_fit(const SpacedSequence& seq, const GrowthFunction& f, std::uint64_t Nmax);

}  // namespace freqlab
