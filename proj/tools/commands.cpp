#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "freqlab/conditions.hpp"
#include "freqlab/density.hpp"
#include "freqlab/dyadic.hpp"
#include "freqlab/envelope.hpp"
#include "freqlab/errors.hpp"
#include "freqlab/io.hpp"
#include "freqlab/orbit.hpp"
#include "freqlab/shift_model.hpp"
#include "freqlab/weighted.hpp"
#include "freqlab/weights.hpp"

namespace freqlab::cli {

namespace {

constexpr double kEnvelopeCMax = 10.0;
constexpr double kEnvelopeCPrimeMax = 20.0;
constexpr std::uint64_t kSimulateGuard = 1000000000;

std::vector<std::string> trace_row(const TracePoint& t) {
  return {std::to_string(t.checkpoint), fmt_double(t.ratio), t.in_window ? "1" : "0", fmt_double(t.running_min),
          fmt_double(t.running_max)};
}

void write_trace(const std::filesystem::path& path, const DensityEstimate& est) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(est.trace.size());
  for (const auto& t : est.trace) rows.push_back(trace_row(t));
  write_csv(path, {"checkpoint", "ratio", "in_window", "running_min", "running_max"}, rows);
}

IntegerSet load_set(const std::string& spec, std::uint64_t bound) {
  if (spec.rfind("file:", 0) == 0) return read_set_file(spec.substr(5), bound);
  return builtin_set(spec, bound);
}

void print_report(const CheckReport& r) {
  std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)\n";
  for (const auto& f : r.failures) std::cout << "  " << f << "\n";
}

nlohmann::json status_json(bool passed) { return {{"passed", passed}, {"exit_code", passed ? 0 : 1}}; }

Params explicit_params(const RunConfig& cfg) {
  if (cfg.a2.empty() != cfg.eps.empty()) throw UsageError("--a2 and --eps go together");
  Params p;
  try {
    p.a_sq = mpz_class(cfg.a2);
    p.eps = mpq_class(cfg.eps);
    p.eps.canonicalize();
  } catch (const std::invalid_argument&) {
    throw UsageError("--a2 must be an integer and --eps a rational c/d");
  }
  if (p.a_sq <= 0 || p.eps <= 0) throw UsageError("--a2 and --eps must be positive");
  return p;
}

Params default_or_explicit(const RunConfig& cfg) {
  if (cfg.auto_params || (cfg.a2.empty() && cfg.eps.empty())) return default_params();
  return explicit_params(cfg);
}

// The counterexample suites on a feasible model.
std::vector<CheckReport> counterexample_suite(const CounterexampleModel& model, const RunConfig& cfg,
                                              HittingReport* keep = nullptr) {
  std::vector<CheckReport> parts;
  parts.push_back(verify_interval_axioms(model, cfg.umax));
  parts.push_back(verify_weight_feasibility(model, cfg.umax, cfg.slope_samples, cfg.seed));
  HittingReport hr = verify_conditions_abcd(model, cfg.pmax, cfg.samples, cfg.seed);
  parts.push_back(hr.a);
  parts.push_back(hr.b);
  parts.push_back(hr.c);
  parts.push_back(hr.d);

  CheckReport nf;
  nf.name = "nonfhc_bound";
  nf.identity = "6 [sum_{p<q<=Q} (8q+1)/b_q + 2^{-Q}] <= 6 2^{-p}";
  for (std::uint64_t p = 1; p <= 10; ++p) {
    const NonFhcBound b = nonfhc_bound(model, p);
    mpq_class cap(6, mpz_class(1) << static_cast<mp_bitcnt_t>(p));
    cap.canonicalize();
    ++nf.cases;
    if (b.value > cap) nf.fail("p = " + std::to_string(p) + ": " + b.value.get_str() + " > " + cap.get_str());
  }
  parts.push_back(nf);
  parts.push_back(vanish_terms_check(model, 1, 1, 3));
  if (keep) *keep = std::move(hr);
  return parts;
}

}  // namespace

int cmd_density(const RunConfig& cfg) {
  if (cfg.set.empty() == cfg.seq.empty()) throw UsageError("density needs exactly one of --set and --seq");
  const AdmissibleMatrix m = parse_matrix(cfg.matrix);
  const Exec exec = cfg.exec_mode();
  DensityEstimate est;
  nlohmann::json report = {{"config", cfg.to_json()}, {"matrix", m.to_json()}};
  if (!cfg.set.empty()) {
    if (cfg.horizon == 0) throw UsageError("--horizon must be >= 1");
    const IntegerSet set = load_set(cfg.set, cfg.horizon);
    est = lower_density_estimate(m, set, cfg.horizon, exec);
    const DensityEstimate up = upper_density_estimate(m, set, cfg.horizon, exec);
    report["lower"] = est.summary_json();
    report["upper"] = up.summary_json();
  } else {
    if (cfg.K == 0) throw UsageError("--K must be >= 1");
    SpacedSequence seq;
    if (cfg.seq == "plain") {
      seq = build_n(cfg.K, exec);
    } else {
      const GrowthFunction f = parse_growth(cfg.seq);
      seq = build_nf(f, cfg.K, exec);
    }
    est = seq_density_estimate(m, seq.terms, cfg.K, exec);
    report["sequence"] = est.summary_json();
    report["last_term"] = seq.terms.back();
  }

  RunFolder run(output_base(), cfg.to_json());
  write_trace(run.file("trace.csv"), est);
  write_json(run.file("report.json"), report);
  run.commit(status_json(true));
  std::cout << "running_min " << fmt_double(est.running_min) << "\nrunning_max " << fmt_double(est.running_max)
            << "\n" << run.final_path().string() << "\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  static const std::vector<std::string> kSuites = {"identities", "envelope", "separation", "counterexample"};
  std::vector<std::string> suites;
  if (cfg.suite == "all")
    suites = kSuites;
  else if (std::find(kSuites.begin(), kSuites.end(), cfg.suite) != kSuites.end())
    suites = {cfg.suite};
  else
    throw UsageError("unknown suite '" + cfg.suite + "' (identities, envelope, separation, counterexample, all)");

  const Exec exec = cfg.exec_mode();
  std::vector<CheckReport> reports;
  nlohmann::json extra = nlohmann::json::object();
  for (const auto& s : suites) {
    if (s == "identities") {
      reports.push_back(identity_check_plain(cfg.kmax, exec));
      reports.push_back(counting_identity_check(static_cast<unsigned>(std::min<std::uint64_t>(cfg.mmax, 16))));
      const GrowthFunction f = parse_growth(cfg.a_spec.empty() ? "1,4,8,16,32" : cfg.a_spec);
      reports.push_back(closed_form_check(f, cfg.Nmax, exec));
    } else if (s == "envelope") {
      reports.push_back(envelope_check_plain(cfg.kmax, exec));
      const GrowthFunction f = parse_growth(cfg.a_spec.empty() ? "tower:2" : cfg.a_spec);
      const SpacedSequence seq = build_nf(f, cfg.Nmax, exec);
      EnvelopeFit fit = envelope_fit(seq, f, cfg.Nmax);
      CheckReport r = fit.report;
      if (fit.C > kEnvelopeCMax) r.fail("fitted C = " + fmt_double(fit.C) + " exceeds " + fmt_double(kEnvelopeCMax));
      if (fit.C_prime > kEnvelopeCPrimeMax)
        r.fail("fitted C' = " + fmt_double(fit.C_prime) + " exceeds " + fmt_double(kEnvelopeCPrimeMax));
      extra["envelope_fit"] = {{"C", fit.C},
                               {"C_prime", fit.C_prime},
                               {"S_approx", fit.S_partial.get_d()},
                               {"min_residual", fit.min_residual},
                               {"max_residual", fit.max_residual},
                               {"sign_changes", fit.sign_changes}};
      reports.push_back(std::move(r));
    } else if (s == "separation") {
      const GrowthFunction plain = identity_a(64);
      CheckReport r1 = separation_check(build_n(cfg.sep_kmax, exec), plain, cfg.sep_kmax, exec);
      r1.name += " (plain)";
      const GrowthFunction f = parse_growth(cfg.a_spec.empty() ? "1,4,8,16,32" : cfg.a_spec);
      CheckReport r2 = separation_check(build_nf(f, cfg.sep_kmax, exec), f, cfg.sep_kmax, exec);
      r2.name += " (weighted)";
      reports.push_back(std::move(r1));
      reports.push_back(std::move(r2));
    } else {
      const Params prm = default_params();
      const CounterexampleModel model(prm.a_sq, prm.eps, cfg.umax);
      for (auto& r : counterexample_suite(model, cfg)) reports.push_back(std::move(r));
    }
  }

  bool passed = true;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : reports) {
    print_report(r);
    passed = passed && r.passed;
    list.push_back(r.to_json());
  }
  RunFolder run(output_base(), cfg.to_json());
  write_json(run.file("report.json"),
             {{"config", cfg.to_json()}, {"passed", passed}, {"reports", list}, {"extra", extra}});
  run.commit(status_json(passed));
  std::cout << (passed ? "all checks passed" : "some checks failed") << "\n" << run.final_path().string() << "\n";
  return passed ? 0 : 1;
}

int cmd_counterexample(const RunConfig& cfg) {
  const Params prm = default_or_explicit(cfg);
  const auto [p_lo, p_hi] = parse_range(cfg.bound_table);
  nlohmann::json params = {{"a2", prm.a_sq.get_str()}, {"eps", prm.eps.get_str()}};
  if (cfg.auto_params) {
    try {
      const Params lex = find_params({});
      params["search"] = {{"a2", lex.a_sq.get_str()}, {"eps", lex.eps.get_str()}};
    } catch (const SearchError& e) {
      params["search"] = e.what();
    }
  }

  const Feasibility feas = check_feasibility(prm.a_sq, prm.eps);
  if (!feas.feasible) {
    RunFolder run(output_base(), cfg.to_json());
    write_json(run.file("report.json"),
               {{"config", cfg.to_json()}, {"params", params}, {"feasibility", feas.to_json()}, {"passed", false}});
    run.commit(status_json(false));
    std::cout << "infeasible parameters: constraint " << feas.binding << " violated: " << feas.constraint << "\n"
              << run.final_path().string() << "\n";
    return 1;
  }

  const CounterexampleModel model(prm.a_sq, prm.eps, cfg.umax, std::max<std::uint64_t>(8, cfg.pmax));
  const WeightRealization weights(model);
  HittingReport hr;
  std::vector<CheckReport> parts = counterexample_suite(model, cfg, &hr);

  std::vector<std::vector<std::string>> bound_rows;
  bool bounds_ok = true;
  for (std::uint64_t p = p_lo; p <= p_hi; ++p) {
    const NonFhcBound b = nonfhc_bound(model, p);
    mpq_class cap(6, mpz_class(1) << static_cast<mp_bitcnt_t>(p));
    cap.canonicalize();
    const bool ok = b.value <= cap;
    bounds_ok = bounds_ok && ok;
    bound_rows.push_back({std::to_string(p), b.value.get_str(), fmt_double(b.approx()), cap.get_str(),
                          fmt_double(cap.get_d()), std::to_string(b.Q), ok ? "1" : "0"});
  }

  // Window around the first scale plateau, where the weight climbs to its height.
  std::vector<std::vector<std::string>> trace_rows;
  for (std::uint64_t u = 1; u <= model.umax(); ++u) {
    const auto& pl = weights.plateaus(u);
    if (pl.empty()) continue;
    const mpz_class start = pl.front().lo - 2 * static_cast<long>(u) - 8;
    for (long i = 0; i < 4 * static_cast<long>(u) + 24; ++i) {
      const mpz_class n = start + i;
      const ProductValue v = weights.eval(n);
      trace_rows.push_back({n.get_str(), std::to_string(v.log2), layer_name(v.top.kind), std::to_string(v.scale)});
    }
    break;
  }

  bool passed = bounds_ok;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : parts) {
    print_report(r);
    passed = passed && r.passed;
    list.push_back(r.to_json());
  }

  RunFolder run(output_base(), cfg.to_json());
  nlohmann::json mj = model.to_json();
  mj["params"] = params;
  mj["weights"] = weights.to_json();
  write_json(run.file("model.json"), mj);
  write_json(run.file("conditions.json"),
             {{"config", cfg.to_json()}, {"passed", passed}, {"conditions", hr.to_json()}, {"reports", list}});
  write_csv(run.file("nonfhc.csv"), {"p", "bound", "bound_approx", "cap", "cap_approx", "Q", "ok"}, bound_rows);
  write_csv(run.file("trace.csv"), {"n", "log2_product", "layer", "scale"}, trace_rows);
  run.commit(status_json(passed));
  std::cout << "model a2 = " << prm.a_sq.get_str() << ", eps = " << prm.eps.get_str() << "\n"
            << (passed ? "all checks passed" : "some checks failed") << "\n" << run.final_path().string() << "\n";
  return passed ? 0 : 1;
}

namespace {

std::vector<double> read_doubles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<double> out;
  double v = 0;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw UsageError(path + " is not a list of numbers");
  return out;
}

std::vector<double> initial_vector(const std::string& spec, const std::vector<double>& w, std::size_t dim) {
  std::vector<double> x(dim, 0.0);
  if (spec == "zero") return x;
  if (spec.rfind("file:", 0) == 0) {
    auto v = read_doubles(spec.substr(5));
    if (v.size() > dim) throw UsageError("initial vector longer than --dim");
    std::copy(v.begin(), v.end(), x.begin());
    return x;
  }
  if (spec.rfind("block:", 0) == 0) {
    // x_N = 1 / (w_1 ... w_N) lands exactly on e_0 after N steps; several N give several visits.
    std::stringstream ss(spec.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto [n, hi] = parse_range(item);
      if (n != hi || n >= dim) throw UsageError("block index must be a single integer below --dim");
      double prod = 1.0;
      for (std::uint64_t k = 1; k <= n; ++k) prod *= w[k - 1];
      x[n] += 1.0 / prod;
    }
    return x;
  }
  throw UsageError("unknown initial vector '" + spec + "' (zero, block:N[,N...], file:PATH)");
}

}  // namespace

int cmd_simulate(const RunConfig& cfg) {
  if (cfg.dim < 1 || cfg.steps < 1) throw UsageError("--dim and --steps must be >= 1");
  if (cfg.dim > kSimulateGuard / cfg.steps)
    throw ResourceError("dim * steps exceeds the guard " + std::to_string(kSimulateGuard));
  const std::vector<double> w = cfg.weights.rfind("file:", 0) == 0 ? read_doubles(cfg.weights.substr(5))
                                                                   : weight_preset(cfg.weights, cfg.dim);
  if (w.size() + 1 < cfg.dim) throw UsageError("weight file needs dim - 1 entries");
  const std::vector<double> x = initial_vector(cfg.x, w, cfg.dim);
  std::vector<double> target;
  if (cfg.target == "e0")
    target = {1.0};
  else if (cfg.target != "zero")
    throw UsageError("--target must be e0 or zero");

  std::vector<AdmissibleMatrix> mats;
  {
    std::stringstream ss(cfg.matrices);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) mats.push_back(parse_matrix(item));
  }

  const OrbitResult orbit = finite_orbit_sim(w, x, cfg.steps, target, cfg.radius);
  const IntegerSet hits = orbit.hitting_set();
  nlohmann::json dens = nlohmann::json::array();
  for (const auto& m : mats) {
    const DensityEstimate est = lower_density_estimate(m, hits, cfg.steps, cfg.exec_mode());
    dens.push_back({{"matrix", m.label()}, {"lower", est.summary_json()}});
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(orbit.steps);
  for (std::uint64_t n = 1; n <= orbit.steps; ++n)
    rows.push_back({std::to_string(n), fmt_double(orbit.distance[n - 1]), hits.contains(n) ? "1" : "0"});

  RunFolder run(output_base(), cfg.to_json());
  write_csv(run.file("hits.csv"), {"n", "distance", "hit"}, rows);
  write_json(run.file("report.json"), {{"config", cfg.to_json()},
                                       {"hits", orbit.hits.size()},
                                       {"first_hit", orbit.hits.empty() ? 0 : orbit.hits.front()},
                                       {"densities", dens}});
  run.commit(status_json(true));
  std::cout << "hits " << orbit.hits.size() << " of " << orbit.steps << "\n" << run.final_path().string() << "\n";
  return 0;
}

}  // namespace freqlab::cli
