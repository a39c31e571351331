#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqlab/kernels.hpp"

namespace freqlab {

enum class MatrixFamily { cesaro, a_r, b_r, d_tilde, b_tilde, logarithmic };

// Row-normalized weights alpha_k / sum_{j<=n} alpha_j. Only ln alpha_k is
// ever materialized; alpha_k = 1 below the threshold k0.
class AdmissibleMatrix {
 public:
  MatrixFamily family() const { return family_; }
  const mpq_class& r() const { return r_; }
  int s() const { return s_; }
  std::uint64_t k0() const { return k0_; }

  double log_weight(std::uint64_t k) const;
  std::string label() const;
  nlohmann::json to_json() const;

 private:
  friend AdmissibleMatrix make_matrix(MatrixFamily, const mpq_class&);
  MatrixFamily family_ = MatrixFamily::cesaro;
  mpq_class r_ = 0;
  int s_ = 0;
  double r_d_ = 0.0;
  std::uint64_t k0_ = 1;
};

// r for a_r / b_r, s for d_tilde / b_tilde (must be an integer), ignored otherwise.
AdmissibleMatrix make_matrix(MatrixFamily family, const mpq_class& param = 0);

// cesaro | log | A<r> | B<r> | Dt<s> | Bt<s>, e.g. "A1", "A1/2", "B1", "Dt2".
AdmissibleMatrix parse_matrix(const std::string& spec);

// Iterated natural log, log^{(s)}(x); -inf once an intermediate value is <= 0.
long double iterated_log(long double x, int s);

// Cache of ln alpha_k and ln(sum_{j<=n} alpha_j) for 1 <= k, n <= horizon.
// Immutable after construction.
class WeightTable {
 public:
  WeightTable(const AdmissibleMatrix& m, std::uint64_t horizon, Exec exec = Exec::parallel);

  std::uint64_t horizon() const { return log_w_.size(); }
  double log_weight(std::uint64_t k) const { return log_w_.at(k - 1); }
  double log_cumsum(std::uint64_t n) const { return log_cum_.at(n - 1); }
  const std::vector<double>& log_weights() const { return log_w_; }

 private:
  std::vector<double> log_w_;
  std::vector<double> log_cum_;
};

double log_cumsum(const AdmissibleMatrix& m, std::uint64_t n);

}  // namespace freqlab
