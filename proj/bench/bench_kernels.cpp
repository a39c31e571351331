// Serial reference against the OpenMP kernels. Arg 0 is the problem size,
// arg 1 selects the execution mode (0 serial, 1 parallel).

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "freqlab/density.hpp"
#include "freqlab/kernels.hpp"

using namespace freqlab;

namespace {

Exec mode(const benchmark::State& s) { return s.range(1) ? Exec::parallel : Exec::serial; }

std::vector<double> log_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = -std::log(static_cast<double>(k + 1));  // A1 weights
  return w;
}

std::vector<std::uint8_t> random_mask(std::size_t n) {
  std::mt19937_64 rng(7);
  std::vector<std::uint8_t> m(n);
  for (auto& b : m) b = rng() & 1;
  return m;
}

void BM_ratio_scan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = log_weights(n);
  const auto m = random_mask(n);
  const auto cps = geometric_checkpoints(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::ratio_scan(w, m, cps, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_log_prefix(benchmark::State& state) {
  const auto w = log_weights(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::log_prefix(w, mode(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_prefix_sum(benchmark::State& state) {
  std::vector<std::uint64_t> base(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = i & 7;
  for (auto _ : state) {
    state.PauseTiming();
    auto v = base;
    state.ResumeTiming();
    kernels::prefix_sum(v, mode(state));
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ratio_scan)->ArgsProduct({{1 << 16, 1 << 20, 1 << 23}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_log_prefix)->ArgsProduct({{1 << 16, 1 << 20, 1 << 23}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_prefix_sum)->ArgsProduct({{1 << 16, 1 << 20, 1 << 23}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
