#include "freqlab/matrix.hpp"

#include <cmath>
#include <regex>

#include "freqlab/bigint.hpp"
#include "freqlab/errors.hpp"

namespace freqlab {

namespace {

constexpr int kMaxIteratedLog = 4;

// Smallest k with log^{(s)}(k) > 0, i.e. k > exp^{(s-1)}(1).
std::uint64_t iterated_log_threshold(int s) {
  long double t = 1.0L;
  for (int i = 1; i < s; ++i) t = std::exp(t);
  auto k = static_cast<std::uint64_t>(std::floor(t)) + 1;
  while (k > 1 && iterated_log(static_cast<long double>(k - 1), s) > 0) --k;
  while (!(iterated_log(static_cast<long double>(k), s) > 0)) ++k;
  return k;
}

}  // namespace

long double iterated_log(long double x, int s) {
  for (int i = 0; i < s; ++i) {
    if (!(x > 0)) return -INFINITY;
    x = std::log(x);
  }
  return x;
}

AdmissibleMatrix make_matrix(MatrixFamily family, const mpq_class& param) {
  AdmissibleMatrix m;
  m.family_ = family;
  switch (family) {
    case MatrixFamily::cesaro:
    case MatrixFamily::logarithmic:
      break;
    case MatrixFamily::a_r:
      if (param < 0) throw DomainError("A_r requires r >= 0");
      if (param > 1) throw DomainError("A_r requires r <= 1");
      m.r_ = param;
      break;
    case MatrixFamily::b_r:
      if (param < 1) throw DomainError("B_r requires r >= 1");
      m.r_ = param;
      m.k0_ = 2;
      break;
    case MatrixFamily::d_tilde:
    case MatrixFamily::b_tilde: {
      const char* name = family == MatrixFamily::d_tilde ? "D_tilde" : "B_tilde";
      if (param.get_den() != 1) throw DomainError(std::string(name) + " requires an integer s");
      if (param < 2) throw DomainError(std::string(name) + " requires s >= 2");
      if (param > kMaxIteratedLog)
        throw DomainError(std::string(name) + " supports s <= 4 (the threshold k0 for s >= 5 exceeds 10^1656520)");
      m.s_ = static_cast<int>(param.get_num().get_si());
      m.r_ = param;
      m.k0_ = iterated_log_threshold(m.s_);
      break;
    }
  }
  m.r_d_ = m.r_.get_d();
  return m;
}

double AdmissibleMatrix::log_weight(std::uint64_t k) const {
  if (k < k0_) return 0.0;
  const double x = static_cast<double>(k);
  switch (family_) {
    case MatrixFamily::cesaro: return 0.0;
    case MatrixFamily::logarithmic: return -std::log(x);
    case MatrixFamily::a_r: return std::pow(x, r_d_);
    case MatrixFamily::b_r: return x / std::pow(std::log(x), r_d_);
    case MatrixFamily::d_tilde:
      return static_cast<double>(static_cast<long double>(k) / iterated_log(k, s_));
    case MatrixFamily::b_tilde:
      return static_cast<double>(static_cast<long double>(k) /
                                 (std::log(static_cast<long double>(k)) * iterated_log(k, s_)));
  }
  return 0.0;
}

std::string AdmissibleMatrix::label() const {
  switch (family_) {
    case MatrixFamily::cesaro: return "cesaro";
    case MatrixFamily::logarithmic: return "log";
    case MatrixFamily::a_r: return "A_" + to_string(r_);
    case MatrixFamily::b_r: return "B_" + to_string(r_);
    case MatrixFamily::d_tilde: return "Dt_" + std::to_string(s_);
    case MatrixFamily::b_tilde: return "Bt_" + std::to_string(s_);
  }
  return "?";
}

nlohmann::json AdmissibleMatrix::to_json() const {
  nlohmann::json j{{"family", label()}, {"k0", k0_}};
  if (family_ == MatrixFamily::a_r || family_ == MatrixFamily::b_r) j["r"] = to_string(r_);
  if (family_ == MatrixFamily::d_tilde || family_ == MatrixFamily::b_tilde) j["s"] = s_;
  return j;
}

AdmissibleMatrix parse_matrix(const std::string& spec) {
  if (spec == "cesaro") return make_matrix(MatrixFamily::cesaro);
  if (spec == "log" || spec == "logarithmic") return make_matrix(MatrixFamily::logarithmic);
  static const std::regex re(R"((A|B|Dt|Bt)_?([0-9]+(/[0-9]+)?))");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw DomainError("unknown matrix family '" + spec + "'");
  const mpq_class p = parse_rational(m[2].str());
  const std::string fam = m[1].str();
  if (fam == "A") return make_matrix(MatrixFamily::a_r, p);
  if (fam == "B") return make_matrix(MatrixFamily::b_r, p);
  if (fam == "Dt") return make_matrix(MatrixFamily::d_tilde, p);
  return make_matrix(MatrixFamily::b_tilde, p);
}

WeightTable::WeightTable(const AdmissibleMatrix& m, std::uint64_t horizon, Exec exec) : log_w_(horizon) {
  if (horizon == 0) throw DomainError("weight table needs horizon >= 1");
  const auto n = static_cast<std::int64_t>(horizon);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (std::int64_t k = 1; k <= n; ++k) log_w_[k - 1] = m.log_weight(static_cast<std::uint64_t>(k));
  log_cum_ = kernels::log_prefix(log_w_, exec);
}

double log_cumsum(const AdmissibleMatrix& m, std::uint64_t n) {
  if (n == 0) throw DomainError("log_cumsum needs n >= 1");
  return WeightTable(m, n).log_cumsum(n);
}

}  // namespace freqlab
