#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

#include "rectilib/generators.hpp"
#include "rectilib/kernels.hpp"
#include "rectilib/nets.hpp"

using namespace rectilib;

namespace {

const MetricMeasureSpace& cloud(int side) {
  static std::map<int, MetricMeasureSpace> cache;
  auto it = cache.find(side);
  if (it == cache.end()) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::cascade;
    spec.resolution = side;
    it = cache.emplace(side, generate(spec).space).first;
  }
  return it->second;
}

std::vector<PointId> every(std::size_t n, std::size_t stride) {
  std::vector<PointId> out;
  for (PointId p = 0; p < n; p += stride) out.push_back(p);
  return out;
}

template <auto Kernel>
void ball_masses(benchmark::State& state) {
  const auto& s = cloud(static_cast<int>(state.range(0)));
  const auto centers = every(s.size(), 4);
  const std::vector<double> radii{0.2, 0.1, 0.05, 0.025, 0.0125};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s, centers, radii));
  state.SetItemsProcessed(state.iterations() * centers.size() * s.size());
}

template <auto Kernel>
void distance_to_set(benchmark::State& state) {
  const auto& s = cloud(static_cast<int>(state.range(0)));
  const auto set = every(s.size(), 16);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s, set));
  state.SetItemsProcessed(state.iterations() * set.size() * s.size());
}

template <auto Kernel>
void nearest_member(benchmark::State& state) {
  const auto& s = cloud(static_cast<int>(state.range(0)));
  std::vector<PointId> all(s.size());
  std::iota(all.begin(), all.end(), 0);
  const auto set = every(s.size(), 16);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s, all, set));
  state.SetItemsProcessed(state.iterations() * set.size() * s.size());
}

template <auto Kernel>
void diameter(benchmark::State& state) {
  const auto& s = cloud(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(s));
}

void build_nets_cascade(benchmark::State& state) {
  const auto& s = cloud(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_nets(s, 0.25, 0, 6));
}

}  // namespace

BENCHMARK(ball_masses<kernels::serial::ball_masses>)->Name("ball_masses/serial")->Arg(5)->Arg(6);
BENCHMARK(ball_masses<kernels::parallel::ball_masses>)->Name("ball_masses/parallel")->Arg(5)->Arg(6);
BENCHMARK(distance_to_set<kernels::serial::distance_to_set>)->Name("distance_to_set/serial")->Arg(5)->Arg(6);
BENCHMARK(distance_to_set<kernels::parallel::distance_to_set>)->Name("distance_to_set/parallel")->Arg(5)->Arg(6);
BENCHMARK(nearest_member<kernels::serial::nearest_member>)->Name("nearest_member/serial")->Arg(5)->Arg(6);
BENCHMARK(nearest_member<kernels::parallel::nearest_member>)->Name("nearest_member/parallel")->Arg(5)->Arg(6);
BENCHMARK(diameter<kernels::serial::diameter>)->Name("diameter/serial")->Arg(5)->Arg(6);
BENCHMARK(diameter<kernels::parallel::diameter>)->Name("diameter/parallel")->Arg(5)->Arg(6);
BENCHMARK(build_nets_cascade)->Arg(5)->Arg(6);

int main(int argc, char** argv) {
  kernels::apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
