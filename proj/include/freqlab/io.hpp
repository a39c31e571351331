#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace freqlab {

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Comma-separated, header first, no quoting (fields never contain commas).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Number formatting shared by every writer so reruns are byte-identical.
std::string fmt_double(double v);

// Output folder named after the config hash. Files go to a hidden staging
// folder first; commit() writes the manifest and renames it into place, and a
// folder that is never committed is removed.
class RunFolder {
 public:
  RunFolder(const std::filesystem::path& base, const nlohmann::json& config);
  ~RunFolder();
  RunFolder(const RunFolder&) = delete;
  RunFolder& operator=(const RunFolder&) = delete;

  // Path for a file in the staging folder; recorded in the manifest.
  std::filesystem::path file(const std::string& name);
  const std::filesystem::path& final_path() const { return final_; }
  const std::string& run_id() const { return id_; }

  // status goes into the manifest verbatim
  void commit(const nlohmann::json& status);

 private:
  std::filesystem::path staging_;
  std::filesystem::path final_;
  std::string id_;
  nlohmann::json config_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

// FREQLAB_OUT when set, ./runs otherwise.
std::filesystem::path output_base();

}  // namespace freqlab
