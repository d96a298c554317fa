#include <benchmark/benchmark.h>

#include <random>

#include "emlab/emergence.hpp"
#include "emlab/entropy.hpp"
#include "emlab/kmedoids.hpp"
#include "emlab/orbit.hpp"
#include "emlab/quantization.hpp"
#include "emlab/transport.hpp"

using namespace emlab;

namespace {

DiscreteMeasure random_measure(PointSpace s, std::size_t atoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (std::size_t i = 0; i < atoms; ++i) pts.push_back({u(rng), s.box_dimension() == 2 ? u(rng) : 0.0});
  return DiscreteMeasure::uniform(s, pts);
}

void BM_W1Circle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_measure(PointSpace::circle(), n, 1);
  const auto b = random_measure(PointSpace::circle(), n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(w1_distance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W1Circle)->RangeMultiplier(8)->Range(64, 1 << 18)->Complexity();

void BM_W1Square(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_measure(PointSpace::square(), n, 1);
  const auto b = random_measure(PointSpace::square(), n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(w1_distance(a, b));
}
BENCHMARK(BM_W1Square)->RangeMultiplier(2)->Range(8, 128);

void BM_Quantize1D(benchmark::State& state) {
  const auto leb = DiscreteMeasure::lebesgue(PointSpace::unit_interval(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quantize_best(leb, 10).error);
}
BENCHMARK(BM_Quantize1D)->Arg(1000)->Arg(10000);

void BM_DoublingOrbit(benchmark::State& state) {
  const auto sys = DynamicalSystem::mul(2);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_orbit(sys, Sampler::uniform, 1, i++, 1 << 20, n).points.data());
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_DoublingOrbit)->Arg(1000)->Arg(100000);

void BM_GreedyBowenCover(benchmark::State& state) {
  const auto tr = trajectories_from_sampler(DynamicalSystem::tent(), Sampler::uniform, 1, 1 << 14, 8);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_bowen_cover(tr, 8, 0.05).centers);
}
BENCHMARK(BM_GreedyBowenCover);

void BM_Lyapunov2D(benchmark::State& state) {
  const auto sys = DynamicalSystem::standard_map(1.2);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov(sys, {0.3, 0.6}, 100000).sum_positive);
}
BENCHMARK(BM_Lyapunov2D);

void BM_EmergenceIntervalLattice(benchmark::State& state) {
  const auto cloud = sample_cloud(DynamicalSystem::identity(), static_cast<std::size_t>(state.range(0)), 1, 1,
                                  {Sampler::lattice});
  const std::vector<double> grid{0.2, 0.1, 0.05, 0.025};
  for (auto _ : state) benchmark::DoNotOptimize(emergence_curve(cloud, grid).points.size());
}
BENCHMARK(BM_EmergenceIntervalLattice)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_PairwiseW1(benchmark::State& state) {
  const auto cloud = sample_cloud(DynamicalSystem::tent(), 64, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(pairwise_w1(cloud.members).size());
}
BENCHMARK(BM_PairwiseW1)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
