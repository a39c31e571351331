#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "freqlab/errors.hpp"
#include "run_config.hpp"

using freqlab::cli::RunConfig;

namespace {

const std::vector<std::string> kSubcommands = {"density", "verify", "counterexample", "simulate"};

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Sampling seed");
  sub->add_option("--exec", cfg.exec, "serial | parallel")->check(CLI::IsMember({"serial", "parallel"}));
  sub->add_option("--config", "File of key = value lines; flags on the command line win");
}

// Config entries become flags appended after the subcommand, unless the flag is
// already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  auto has_flag = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  for (auto [key, value] : freqlab::cli::read_config_file(path)) {
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (has_flag(flag)) continue;
    if (key == "auto") {
      if (value == "true" || value == "1") extra.push_back(flag);
      continue;
    }
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Density, dyadic-sequence and weighted-shift workbench", "freqlab"};
  app.require_subcommand(1);

  auto* density = app.add_subcommand("density", "Density estimates of a set or a sequence");
  density->add_option("--matrix", cfg.matrix, "cesaro | log | A<r> | B<r> | Dt<s> | Bt<s>");
  density->add_option("--set", cfg.set, "evens | odds | squares | all | empty | file:PATH");
  density->add_option("--seq", cfg.seq, "plain | a-spec");
  density->add_option("--horizon", cfg.horizon, "Horizon for --set");
  density->add_option("--K", cfg.K, "Number of sequence terms for --seq");
  add_common(density, cfg);

  auto* verify = app.add_subcommand("verify", "Run check suites");
  verify->add_option("suite", cfg.suite, "identities | envelope | separation | counterexample | all")->required();
  verify->add_option("--kmax", cfg.kmax, "Range for the plain identities and envelope");
  verify->add_option("--Nmax", cfg.Nmax, "Range for the weighted closed form and envelope fit");
  verify->add_option("--mmax", cfg.mmax, "Counting identity range (at most 16)");
  verify->add_option("--sep-kmax", cfg.sep_kmax, "Separation range");
  verify->add_option("--a", cfg.a_spec, "a-spec: list, tower:S, h:NAME, hfile:PATH, identity");
  verify->add_option("--umax", cfg.umax, "Largest scale u");
  verify->add_option("--pmax", cfg.pmax, "Largest period p for the condition checks");
  verify->add_option("--samples", cfg.samples, "Samples of E_p per scale");
  verify->add_option("--slope-samples", cfg.slope_samples, "Sampled points for the slope check");
  add_common(verify, cfg);

  auto* cex = app.add_subcommand("counterexample", "Build the weighted-shift model and its evidence");
  cex->add_flag("--auto", cfg.auto_params, "Use the default parameters");
  cex->add_option("--a2", cfg.a2, "a^2 (integer)");
  cex->add_option("--eps", cfg.eps, "eps (rational c/d)");
  cex->add_option("--umax", cfg.umax, "Largest scale u");
  cex->add_option("--pmax", cfg.pmax, "Largest period p for the condition checks");
  cex->add_option("--samples", cfg.samples, "Samples of E_p per scale");
  cex->add_option("--slope-samples", cfg.slope_samples, "Sampled points for the slope check");
  cex->add_option("--bound-table", cfg.bound_table, "Range of p for the non-FHC bound table, lo..hi");
  add_common(cex, cfg);

  auto* sim = app.add_subcommand("simulate", "Finite orbit of a weighted backward shift");
  sim->add_option("--weights", cfg.weights, "rolewicz | pure-shift | file:PATH");
  sim->add_option("--x", cfg.x, "zero | block:N[,N...] | file:PATH");
  sim->add_option("--target", cfg.target, "e0 | zero");
  sim->add_option("--radius", cfg.radius, "Ball radius (sup norm)");
  sim->add_option("--dim", cfg.dim, "Truncation dimension");
  sim->add_option("--steps", cfg.steps, "Number of iterations");
  sim->add_option("--matrices", cfg.matrices, "Comma-separated matrix specs for the hitting-set densities");
  add_common(sim, cfg);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (const auto& name : kSubcommands)
    if (app.got_subcommand(name)) cfg.subcommand = name;

  try {
    if (cfg.subcommand == "density") return freqlab::cli::cmd_density(cfg);
    if (cfg.subcommand == "verify") return freqlab::cli::cmd_verify(cfg);
    if (cfg.subcommand == "counterexample") return freqlab::cli::cmd_counterexample(cfg);
    return freqlab::cli::cmd_simulate(cfg);
  } catch (const freqlab::ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
