#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "ptscat/catalog.hpp"
#include "ptscat/scan.hpp"
#include "ptscat/sweep.hpp"

using namespace ptscat;

namespace {

Potential random_stack(std::size_t layers) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<Layer> ls;
  for (std::size_t i = 0; i < layers; ++i) ls.push_back({{u(rng), 0.2 * u(rng)}, 0.05 + 0.1 * std::abs(u(rng))});
  return Potential::layers(-1.0, ls);
}

const std::vector<double>& ks() {
  static const auto g = linspace(0.3, 3.0, 512);
  return g;
}

// Arg 0 selects serial (0) or OpenMP (1); thread count comes from OMP_NUM_THREADS.
void stack_sweep(benchmark::State& state) {
  const auto p = random_stack(static_cast<std::size_t>(state.range(1)));
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto rows = parallel ? sweep(p, ks(), {}) : sweep_serial(p, ks(), {});
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ks().size()));
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}
BENCHMARK(stack_sweep)->ArgsProduct({{0, 1}, {4, 64}})->Unit(benchmark::kMillisecond)->UseRealTime();

void ode_sweep(benchmark::State& state) {
  const auto p = builtin::scarf2();
  const std::vector<double> grid = linspace(0.3, 3.0, 32);
  const SweepOptions opts{.backend = Backend::ode, .ode = {.tol = 1e-10}};
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto rows = parallel ? sweep(p, grid, opts) : sweep_serial(p, grid, opts);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
  state.counters["threads"] = parallel ? omp_get_max_threads() : 1;
}
BENCHMARK(ode_sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void identity_grid(benchmark::State& state) {
  const auto p = builtin::pt_stack4();
  const auto cls = classify_symmetry(p);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto rows = parallel ? identity_reports(p, ks(), {}, cls) : identity_reports_serial(p, ks(), {}, cls);
    benchmark::DoNotOptimize(rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ks().size()));
}
BENCHMARK(identity_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void singularity_scan(benchmark::State& state) {
  const auto p = builtin::pt_bilayer(2.0717, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_spectral_singularities(p, 0.3, 3.0, {}));
}
BENCHMARK(singularity_scan)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
