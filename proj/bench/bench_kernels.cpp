// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <vector>

#include "rftrap/constants.hpp"
#include "rftrap/fluid.hpp"
#include "rftrap/stability.hpp"

using namespace rftrap;

namespace {

const IonSpecies kCa = IonSpecies::calcium40();
const LinearTrap kTemplate(2, 0.01, 1.0, units::mhz_to_angular(2.0));

dynamics::ScanGrid grid(std::size_t n) { return {-0.1, 0.1, n, 0.0, 0.9, n}; }

dynamics::ScanOptions short_scan() {
  dynamics::ScanOptions o;
  o.rf_periods = 100.0;
  return o;
}

std::vector<fluid::CloudRequest> cloud_requests() {
  const LinearTrap quad(2, 3e-3, 2000, units::mhz_to_angular(10.0));
  const LinearTrap oct(4, 0.01, 800, units::mhz_to_angular(10.0));
  std::vector<fluid::CloudRequest> reqs;
  for (double t : {1e4, 3e3, 1e3, 300.0, 100.0, 30.0, 10.0, 5.0}) {
    reqs.push_back({quad, kCa, t, 1e8, units::mhz_to_angular(1.0), {}});
    reqs.push_back({oct, kCa, t, 1.6e7, std::nullopt, {}});
    reqs.push_back({oct.with_order(6), kCa, t, 1.6e7, std::nullopt, {}});
  }
  return reqs;
}

void BM_ScanContinuedFraction(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dynamics::stability_scan(
        kTemplate, kCa, grid(state.range(0)), dynamics::ScanMethod::ContinuedFraction));
}

void BM_ScanContinuedFractionSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dynamics::stability_scan_serial(
        kTemplate, kCa, grid(state.range(0)), dynamics::ScanMethod::ContinuedFraction));
}

void BM_ScanTrajectory(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dynamics::stability_scan(
        kTemplate, kCa, grid(state.range(0)), dynamics::ScanMethod::Trajectory, short_scan()));
}

void BM_ScanTrajectorySerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(dynamics::stability_scan_serial(
        kTemplate, kCa, grid(state.range(0)), dynamics::ScanMethod::Trajectory, short_scan()));
}

void BM_SolveClouds(benchmark::State& state) {
  const auto reqs = cloud_requests();
  for (auto _ : state) benchmark::DoNotOptimize(fluid::solve_clouds(reqs));
}

void BM_SolveCloudsSerial(benchmark::State& state) {
  const auto reqs = cloud_requests();
  for (auto _ : state) benchmark::DoNotOptimize(fluid::solve_clouds_serial(reqs));
}

}  // namespace

BENCHMARK(BM_ScanContinuedFraction)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanContinuedFractionSerial)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanTrajectory)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanTrajectorySerial)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SolveClouds)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SolveCloudsSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
