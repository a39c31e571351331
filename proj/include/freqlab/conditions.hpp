#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "freqlab/check_report.hpp"
#include "freqlab/shift_model.hpp"
#include "freqlab/weights.hpp"

namespace freqlab {

// An explicit element of E_p at scale u.
struct ESample {
  std::uint64_t p = 0;
  std::uint64_t u = 0;
  mpz_class n;
};

// Deterministic samples of E_p at each trimmed scale u <= umax: the first and
// last multiple of b_p in I_u^eps plus random multiples in between.
std::vector<ESample> sample_E(const CounterexampleModel& model, std::uint64_t p, std::uint64_t per_scale,
                              std::uint64_t seed);

// floor(2^{p/2})
mpz_class M_of(std::uint64_t p);

struct HittingReport {
  CheckReport a;
  CheckReport b;
  CheckReport c;
  CheckReport d;
  std::vector<std::pair<std::uint64_t, NonFhcBound>> nonfhc;
  // witnesses refer to samples by index into this table
  std::vector<ESample> samples;
  double min_margin_d = 0.0;  // min over samples of log2 product - log2(M(p) M(q))
  bool passed() const { return a.passed && b.passed && c.passed && d.passed; }
  nlohmann::json to_json() const;
};

// Conditions (a)-(d) for 1 <= p, q <= pmax on sampled elements of E_p at scales <= model.umax().
HittingReport verify_conditions_abcd(const CounterexampleModel& model, std::uint64_t pmax,
                                     std::uint64_t samples_per_scale, std::uint64_t seed = 1);

}  // namespace freqlab
