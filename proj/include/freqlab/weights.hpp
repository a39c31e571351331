#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "freqlab/check_report.hpp"
#include "freqlab/exp_rational.hpp"
#include "freqlab/shift_model.hpp"

namespace freqlab {

enum class LayerKind { none, period, scale, pair };
const char* layer_name(LayerKind k);

// The layer attaining the maximum at some n.
struct LayerHit {
  LayerKind kind = LayerKind::none;
  std::int64_t value = 0;
  std::uint64_t p = 0;  // period layers
  std::uint64_t u = 0;  // scale and pair layers
  std::uint64_t v = 0;  // pair layers
  bool on_plateau = false;
};

struct ProductValue {
  std::int64_t log2 = 0;
  LayerHit top;
  std::uint64_t scale = 0;  // u with n in I_u^{4eps}, 0 when none
};

// log2 of w_1 ... w_n. Every layer is 0 off its support, constant on its
// plateau and moves with slope +-1 in between, the ramps hugging the plateau.
//   period p: height p on b_p N + [-2p, 2p], support b_p N + [-3p+1, 3p-1]
//   scale u:  height u on I_u^eps + [0, p_u]
//   pair u>v: height max(p_u, p_v) on I_u^eps - I_v^eps + [0, p_u]
class WeightRealization {
 public:
  struct Plateau {
    mpz_class lo;
    mpz_class hi;
    std::int64_t height = 0;
    std::uint64_t u = 0;
    std::uint64_t v = 0;  // 0 for the scale plateau
  };

  // Throws ConsistencyError when a ramp does not fit inside I_u^{4eps}.
  explicit WeightRealization(const CounterexampleModel& model);

  ProductValue eval(const mpz_class& n) const;
  std::int64_t log2_product(const mpz_class& n) const { return eval(n).log2; }

  const CounterexampleModel& model() const { return *model_; }
  // Plateaus living in I_u^{4eps}; empty for untrimmed u.
  const std::vector<Plateau>& plateaus(std::uint64_t u) const;

  nlohmann::json to_json() const;

 private:
  void period_layers(const mpz_class& n, LayerHit& best) const;

  const CounterexampleModel* model_;
  ExpRational cap_;  // 2^{(1-4eps) a2^{umax+1}}: evaluation stops below it
  std::vector<std::vector<Plateau>> plateaus_;
};

mpq_class log2_product(const CounterexampleModel& model, const mpz_class& n);

// Height of the period-p layer at n (distance to b_p N_{>=1}).
std::int64_t period_layer_value(const mpz_class& n, const mpz_class& b, std::uint64_t p);

CheckReport verify_weight_feasibility(const CounterexampleModel& model, std::uint64_t umax, std::uint64_t samples,
                                      std::uint64_t seed = 1);

// Pointwise max of integer walks with steps in {-1, 0, 1} keeps steps in {-1, 0, 1}.
CheckReport max_slope_lemma_check(std::uint64_t trials, std::uint64_t seed = 1);

}  // namespace freqlab
