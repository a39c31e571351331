#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace freqlab {

// Pass/fail record of one verification, with the identity checked verbatim
// and witnesses (tight cases on success, violations on failure).
struct CheckReport {
  std::string name;
  std::string identity;
  bool passed = true;
  std::uint64_t cases = 0;
  std::vector<std::string> witnesses;
  std::vector<std::string> failures;
  nlohmann::json details = nlohmann::json::object();

  // Keeps the first few failures only; the count lives in `details`.
  void fail(std::string what);
  void witness(std::string what);

  nlohmann::json to_json() const;
};

// Fold several reports; passes iff every part passes.
CheckReport combine(std::string name, const std::vector<CheckReport>& parts);

}  // namespace freqlab
