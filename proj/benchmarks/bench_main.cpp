#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <random>

#include "gyro/ferrite.hpp"
#include "gyro/polarimetry.hpp"
#include "gyro/smatrix.hpp"
#include "gyro/surrogate.hpp"
#include "gyro/touchstone.hpp"

using namespace gyro;

namespace {

FloquetSMatrix random_passive(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = {u(rng), u(rng)};
  return FloquetSMatrix(m * (0.95 / Eigen::JacobiSVD<Eigen::Matrix4cd>(m).singularValues()(0)));
}

SurrogateParams nonreciprocal() {
  SurrogateParams p;
  p.u = 0.8;
  p.g = 1.4;
  return p;
}

}  // namespace

static void BM_Cascade(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = random_passive(rng), b = random_passive(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cascade(a, b));
}
BENCHMARK(BM_Cascade);

static void BM_SynthSweep(benchmark::State& state) {
  const auto grid = linear_grid(4e9, 7e9, static_cast<std::size_t>(state.range(0)));
  const auto p = nonreciprocal();
  for (auto _ : state) benchmark::DoNotOptimize(synth_ring_response(p, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthSweep)->Arg(801)->Arg(6401);

static void BM_AnalyzeSweep(benchmark::State& state) {
  const auto sweep = synth_ring_response(nonreciprocal(), default_grid());
  const AnalyzeOptions opts{RotationReading::PhaseDifference, static_cast<unsigned>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(analyze_sweep(sweep, Incidence::Port1, opts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sweep.size()));
}
BENCHMARK(BM_AnalyzeSweep)->Arg(1)->Arg(4);

static void BM_KpiCost(benchmark::State& state) {
  const auto sweep = synth_ring_response(nonreciprocal(), default_grid());
  const OptimizationGoal goal;
  for (auto _ : state) benchmark::DoNotOptimize(kpi_cost(sweep, goal));
}
BENCHMARK(BM_KpiCost);

static void BM_IntegrateLlg(benchmark::State& state) {
  using namespace gyro::ferrite;
  const FerriteParams p{1000.0, 0.0, 0.01, kGammaElectron};
  const double period = 1.0 / 2.8e9;
  const Vec3 h(0, 0, 1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_llg({0.5, 0.0, 0.8}, [&](double) { return h; }, p,
                                           period / 200, state.range(0) * period / 200));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateLlg)->Arg(10000);

static void BM_TouchstoneRoundTrip(benchmark::State& state) {
  const auto net = io::to_network(synth_ring_response(nonreciprocal(), default_grid()));
  for (auto _ : state) benchmark::DoNotOptimize(io::parse_touchstone(io::write_touchstone(net), 4));
}
BENCHMARK(BM_TouchstoneRoundTrip)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
