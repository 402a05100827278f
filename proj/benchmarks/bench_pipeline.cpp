#include <benchmark/benchmark.h>

#include <random>

#include "risdoa/anm_admm.hpp"
#include "risdoa/bench.hpp"
#include "risdoa/music.hpp"

namespace {

using namespace risdoa;

SceneConfig scene(int n, int l) {
  SceneConfig cfg;
  cfg.num_ris = n;
  cfg.num_slots = l;
  cfg.snr_db = 3.0;
  cfg.rng_seed = 17;
  return cfg;
}

void BM_PsdProject(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  CMatrix g(2 * n, 2 * n);
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i) g(i, j) = cdouble(normal(rng), normal(rng));
  const CMatrix s = 0.5 * (g + g.adjoint());
  for (auto _ : state) benchmark::DoNotOptimize(psd_project(s));
}
BENCHMARK(BM_PsdProject)->DenseRange(12, 30, 6);

void BM_AdmmSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PipelineTrace trace = run_pipeline(scene(n, 36), EstimatorSettings{});
  AdmmConfig cfg;
  cfg.gamma = trace.gamma;
  for (auto _ : state) benchmark::DoNotOptimize(admm_solve(trace.r_hat, cfg));
}
BENCHMARK(BM_AdmmSolve)->DenseRange(12, 30, 6)->Unit(benchmark::kMillisecond);

void BM_MusicSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PipelineTrace trace = run_pipeline(scene(n, 36), EstimatorSettings{});
  const CMatrix t = trace.admm.toeplitz();
  const MusicConfig music;
  const std::vector<double> grid = scan_grid(music);
  const ArrayGeometry geom = ArrayGeometry::half_wavelength(n);
  for (auto _ : state) benchmark::DoNotOptimize(music_spectrum(t, 3, grid, geom));
}
BENCHMARK(BM_MusicSpectrum)->DenseRange(12, 30, 6)->Unit(benchmark::kMillisecond);

void BM_RunTrial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SceneConfig cfg = scene(n, 36);
  const EstimatorSettings est;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.rng_seed = ++seed;
    benchmark::DoNotOptimize(run_trial(cfg, est));
  }
}
BENCHMARK(BM_RunTrial)->DenseRange(12, 30, 6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
