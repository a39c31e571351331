#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "freqlab/kernels.hpp"
#include "freqlab/weighted.hpp"

namespace freqlab::cli {

struct RunConfig {
  std::string subcommand;

  // density
  std::string matrix = "cesaro";
  std::string set;   // evens | odds | squares | all | empty | file:PATH
  std::string seq;   // a-spec of the sequence (see parse_growth), or "plain"
  std::uint64_t horizon = 100000;
  std::uint64_t K = 100000;

  // verify
  std::string suite;
  std::uint64_t kmax = 1u << 20;
  std::uint64_t Nmax = 1u << 14;
  std::uint64_t mmax = 16;
  std::uint64_t sep_kmax = 5000;
  std::string a_spec;

  // counterexample
  bool auto_params = false;
  std::string a2;
  std::string eps;
  std::uint64_t umax = 5;
  std::uint64_t pmax = 3;
  std::uint64_t samples = 6;
  std::uint64_t slope_samples = 10000;
  std::string bound_table = "1..10";

  // simulate
  std::string weights = "rolewicz";
  std::string x = "block:8";
  std::string target = "e0";
  double radius = 0.5;
  std::uint64_t dim = 16;
  std::uint64_t steps = 1000;
  std::string matrices = "cesaro,log,A1";

  std::uint64_t seed = 1;
  std::string exec = "parallel";

  nlohmann::json to_json() const;
  Exec exec_mode() const;
};

// Thrown for anything the user typed wrong; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// identity | plain | tower:S | h:NAME | hfile:PATH | comma list "1,4,8,16,32" (optionally "list:...")
GrowthFunction parse_growth(const std::string& spec);

// "lo..hi" or a single integer.
std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text);

// Reads "key = value" lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace freqlab::cli
