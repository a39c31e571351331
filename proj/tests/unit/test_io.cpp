#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "freqlab/io.hpp"

using namespace freqlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("freqlab_test_io_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("doubles print with round-trip precision") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) CHECK(std::strtod(fmt_double(v).c_str(), nullptr) == v);
}

TEST_CASE("committed run folders hold the files and a manifest") {
  const fs::path base = scratch("commit");
  const nlohmann::json cfg = {{"subcommand", "density"}, {"horizon", 60}};
  std::string id;
  {
    RunFolder run(base, cfg);
    id = run.run_id();
    write_csv(run.file("t.csv"), {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    write_json(run.file("r.json"), {{"x", 1}});
    run.commit({{"passed", true}});
  }
  const fs::path dir = base / id;
  CHECK(slurp(dir / "t.csv") == "a,b\n1,2\n3,4\n");
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["run_id"] == id);
  CHECK(manifest["config"] == cfg);
  CHECK(manifest["files"].size() == 2);
  CHECK(manifest["files"][0]["bytes"] == 12);
  // Only the final folder is left behind.
  CHECK(std::distance(fs::directory_iterator(base), fs::directory_iterator{}) == 1);
  fs::remove_all(base);
}

TEST_CASE("identical configs give identical bytes; an abandoned run leaves nothing") {
  const fs::path base = scratch("determinism");
  const nlohmann::json cfg = {{"seed", 3}};
  std::string first;
  for (int i = 0; i < 2; ++i) {
    RunFolder run(base, cfg);
    write_json(run.file("r.json"), {{"v", 0.1}});
    run.commit({{"passed", true}});
    const std::string now = slurp(run.final_path() / "manifest.json") + slurp(run.final_path() / "r.json");
    if (i == 0)
      first = now;
    else
      CHECK(now == first);
  }
  {
    RunFolder run(base, {{"seed", 4}});
    write_json(run.file("r.json"), {{"v", 1}});
  }
  CHECK(std::distance(fs::directory_iterator(base), fs::directory_iterator{}) == 1);
  CHECK(RunFolder(base, cfg).run_id() != RunFolder(base, {{"seed", 4}}).run_id());
  fs::remove_all(base);
}
