#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqlab/integer_set.hpp"
#include "freqlab/matrix.hpp"

namespace freqlab {

inline constexpr double kCheckpointRatio = 1.05;
inline constexpr double kDualityTolerance = 1e-9;
inline constexpr double kConvergenceTolerance = 1e-3;
inline constexpr double kVanishingTolerance = 1e-3;

struct TracePoint {
  std::uint64_t checkpoint = 0;
  double ratio = 0.0;
  bool in_window = false;
  double running_min = 0.0;  // meaningful only inside the tail window
  double running_max = 0.0;
};

struct DensityEstimate {
  std::string kind;  // lower | upper | sequence
  std::uint64_t horizon = 0;
  std::uint64_t window_start = 0;
  std::vector<TracePoint> trace;
  double running_min = 0.0;  // liminf proxy
  double running_max = 0.0;  // limsup proxy
  double final_ratio = 0.0;
  bool converged = false;
  double tolerance = kConvergenceTolerance;
  double max_duality_defect = 0.0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json summary_json() const;
};

// 1 = c_0 < c_1 < ... with c_{i+1} = max(c_i + 1, ceil(1.05 c_i)), ending exactly at horizon.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon, double ratio = kCheckpointRatio);

// Ratio (sum_{k in E, k <= n} alpha_k) / (sum_{k <= n} alpha_k) at geometric checkpoints;
// running_min over [horizon/10, horizon].
DensityEstimate lower_density_estimate(const AdmissibleMatrix& m, const IntegerSet& set, std::uint64_t horizon,
                                       Exec exec = Exec::parallel);

// Same trace with running_max; each checkpoint is checked against 1 - ratio of the complement.
DensityEstimate upper_density_estimate(const AdmissibleMatrix& m, const IntegerSet& set, std::uint64_t horizon,
                                       Exec exec = Exec::parallel);

struct VanishingCheck {
  bool passed = false;
  std::string verdict;  // which branch decided
  std::vector<std::pair<std::uint64_t, double>> trace;  // (n, alpha_n / sum_{j<=n} alpha_j)
  double final_ratio = 0.0;
  nlohmann::json to_json() const;
};

// alpha_n / sum_{j<=n} alpha_j -> 0, judged on the last decade of checkpoints.
VanishingCheck vanishing_ratio_check(const AdmissibleMatrix& m, std::uint64_t horizon);

// seq[k-1] = n_k. Ratio at k: sum_{j<=k} alpha_{n_j} / sum_{j<=n_k} alpha_j, checkpoints in k.
DensityEstimate seq_density_estimate(const AdmissibleMatrix& m, std::span<const std::uint64_t> seq, std::uint64_t K,
                                     Exec exec = Exec::parallel);

// Finite-horizon lower estimates of one set under several families. Reported only:
// the asymptotic ordering between families need not show at finite horizons.
nlohmann::json compare_families(const IntegerSet& set, std::uint64_t horizon);

}  // namespace freqlab
