#include "freqlab/io.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "freqlab/errors.hpp"

namespace freqlab {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  if (!out) throw ResourceError("write failed for " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw ResourceError("write failed for " + path.string());
}

fs::path output_base() {
  if (const char* env = std::getenv("FREQLAB_OUT"); env && *env) return fs::path(env);
  return fs::path("runs");
}

RunFolder::RunFolder(const fs::path& base, const nlohmann::json& config) : config_(config) {
  id_ = "run-" + hex64(fnv1a64(config.dump()));
  final_ = base / id_;
  staging_ = base / ("." + id_ + ".tmp-" + std::to_string(::getpid()));
  std::error_code ec;
  fs::create_directories(base, ec);
  fs::remove_all(staging_, ec);
  if (!fs::create_directories(staging_, ec) || ec)
    throw ResourceError("cannot create output folder under " + base.string());
}

RunFolder::~RunFolder() {
  if (!committed_) {
    std::error_code ec;
    fs::remove_all(staging_, ec);
  }
}

fs::path RunFolder::file(const std::string& name) {
  files_.push_back(name);
  return staging_ / name;
}

void RunFolder::commit(const nlohmann::json& status) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : files_) {
    std::error_code ec;
    const auto size = fs::file_size(staging_ / f, ec);
    files.push_back({{"name", f}, {"bytes", ec ? 0 : size}});
  }
  write_json(staging_ / "manifest.json",
             {{"run_id", id_}, {"config", config_}, {"files", files}, {"status", status}});
  std::error_code ec;
  fs::remove_all(final_, ec);
  fs::rename(staging_, final_, ec);
  if (ec) throw ResourceError("cannot move run folder into place: " + ec.message());
  committed_ = true;
}

}  // namespace freqlab
