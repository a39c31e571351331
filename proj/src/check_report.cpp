#include "freqlab/check_report.hpp"

namespace freqlab {

namespace {
constexpr std::size_t kKeepFailures = 32;
constexpr std::size_t kKeepWitnesses = 64;
}  // namespace

void CheckReport::fail(std::string what) {
  passed = false;
  const auto n = details.value("failure_count", std::uint64_t{0}) + 1;
  details["failure_count"] = n;
  if (failures.size() < kKeepFailures) failures.push_back(std::move(what));
}

void CheckReport::witness(std::string what) {
  if (witnesses.size() < kKeepWitnesses) witnesses.push_back(std::move(what));
}

nlohmann::json CheckReport::to_json() const {
  return {{"name", name},         {"identity", identity}, {"passed", passed},
          {"cases", cases},       {"witnesses", witnesses}, {"failures", failures},
          {"details", details}};
}

CheckReport combine(std::string name, const std::vector<CheckReport>& parts) {
  CheckReport out;
  out.name = std::move(name);
  out.identity = "all parts pass";
  nlohmann::json list = nlohmann::json::array();
  for (const auto& p : parts) {
    out.cases += p.cases;
    if (!p.passed) out.fail(p.name);
    list.push_back(p.to_json());
  }
  out.details["parts"] = std::move(list);
  return out;
}

}  // namespace freqlab
