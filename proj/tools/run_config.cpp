#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "freqlab/errors.hpp"
#include "freqlab/growth_rules.hpp"

namespace freqlab::cli {

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"subcommand", subcommand}, {"seed", seed}, {"exec", exec}};
  if (subcommand == "density") {
    j["matrix"] = matrix;
    if (!set.empty()) {
      j["set"] = set;
      j["horizon"] = horizon;
    } else {
      j["seq"] = seq;
      j["K"] = K;
    }
  } else if (subcommand == "verify") {
    j["suite"] = suite;
    j["kmax"] = kmax;
    j["Nmax"] = Nmax;
    j["mmax"] = mmax;
    j["sep_kmax"] = sep_kmax;
    j["a"] = a_spec;
    j["umax"] = umax;
    j["pmax"] = pmax;
    j["samples"] = samples;
    j["slope_samples"] = slope_samples;
  } else if (subcommand == "counterexample") {
    j["auto"] = auto_params;
    j["a2"] = a2;
    j["eps"] = eps;
    j["umax"] = umax;
    j["pmax"] = pmax;
    j["samples"] = samples;
    j["slope_samples"] = slope_samples;
    j["bound_table"] = bound_table;
  } else if (subcommand == "simulate") {
    j["weights"] = weights;
    j["x"] = x;
    j["target"] = target;
    j["radius"] = radius;
    j["dim"] = dim;
    j["steps"] = steps;
    j["matrices"] = matrices;
  }
  return j;
}

Exec RunConfig::exec_mode() const {
  if (exec == "serial") return Exec::serial;
  if (exec == "parallel") return Exec::parallel;
  throw UsageError("--exec must be serial or parallel");
}

namespace {

std::uint64_t to_u64(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw UsageError("bad integer '" + text + "' in " + what);
  return v;
}

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_u64(item, "a-spec list"));
  if (out.empty()) throw UsageError("empty a-spec list");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

GrowthFunction parse_growth(const std::string& spec) {
  if (spec.empty()) throw UsageError("missing a-spec");
  if (spec == "identity" || spec == "plain") return identity_a(64);
  if (spec.rfind("tower:", 0) == 0) {
    const auto s = to_u64(spec.substr(6), "tower level");
    if (s < 2 || s > 8) throw UsageError("tower level must be in 2..8");
    // Longest head under the tower guard.
    std::size_t m = 2;
    while (m < 64) {
      try {
        tower_a(static_cast<unsigned>(s), m + 1);
      } catch (const ResourceError&) {
        break;
      }
      ++m;
    }
    return tower_a(static_cast<unsigned>(s), m);
  }
  if (spec.rfind("h:", 0) == 0 || spec.rfind("hfile:", 0) == 0) {
    const bool file = spec[1] == 'f';
    const HGrid grid = file ? read_h_grid(spec.substr(6)) : builtin_h(spec.substr(2), 2, 1000000);
    AFromH res = a_from_h(grid, 64);
    if (res.a.size() < 2) throw UsageError("h grid yields fewer than two a-terms");
    return GrowthFunction(res.a, spec);
  }
  if (spec.rfind("list:", 0) == 0) return growth_from_a(parse_list(spec.substr(5)));
  if (spec.find_first_not_of("0123456789,") == std::string::npos) return growth_from_a(parse_list(spec));
  throw UsageError("unknown a-spec '" + spec + "'");
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = to_u64(text, "range");
    return {v, v};
  }
  const auto lo = to_u64(text.substr(0, dots), "range");
  const auto hi = to_u64(text.substr(dots + 2), "range");
  if (lo == 0 || lo > hi) throw UsageError("range must be lo..hi with 1 <= lo <= hi");
  return {lo, hi};
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

}  // namespace freqlab::cli
