// Serial reference kernels against their OpenMP counterparts on sphere clouds.
//
//   ./build/bench/gbssl_bench --benchmark_filter=radius
//   OMP_NUM_THREADS=4 ./build/bench/gbssl_bench
//
// Times are wall clock. The serial radius and knn kernels are brute force, so
// their gap to the parallel ones includes the cell grid, not only threading;
// serial oscillation scans all pairs in each ball instead of taking max - min.

#include <benchmark/benchmark.h>

#include <cmath>

#include "gbssl/cloud.hpp"
#include "gbssl/graph.hpp"
#include "gbssl/interpolate.hpp"
#include "gbssl/kernels.hpp"

namespace {

using namespace gbssl;
namespace k = gbssl::kernels;

double eps_for(Index n) { return default_eps(n, 2, 2.0); }

struct Fixture {
    PointCloud cloud;
    k::Adjacency adjacency;
    Vector values;

    explicit Fixture(Index n) : cloud(sample_sphere(n, 1)) {
        adjacency = k::radius_neighbors(cloud.points(), eps_for(n));
        values = cloud.points().col(0) + cloud.points().col(2).array().square().matrix();
    }
};

template <auto Kernel>
void radius(benchmark::State& state) {
    const PointCloud cloud = sample_sphere(state.range(0), 1);
    const double eps = eps_for(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(cloud.points(), eps));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void knn(benchmark::State& state) {
    const PointCloud cloud = sample_sphere(state.range(0), 1);
    const RowMatrix grid = sphere_grid(2000, 7);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(cloud.points(), grid, 4));
    state.SetItemsProcessed(state.iterations() * grid.rows());
}

template <auto Kernel>
void oscillation(benchmark::State& state) {
    const Fixture f(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.adjacency, f.values));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void power_sum(benchmark::State& state) {
    const Fixture f(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(f.adjacency, f.values, 3.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Build>
void eps_graph(benchmark::State& state) {
    const PointCloud cloud = sample_sphere(state.range(0), 1);
    const double eps = eps_for(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(Build(cloud, eps));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

#define GBSSL_PAIR(name, fn, lo, hi)                                                        \
    BENCHMARK(name<k::serial::fn>)->Name(#name "/serial")->RangeMultiplier(4)->Range(lo, hi) \
        ->Unit(benchmark::kMillisecond)->UseRealTime();                                                    \
    BENCHMARK(name<k::fn>)->Name(#name "/openmp")->RangeMultiplier(4)->Range(lo, hi)         \
        ->Unit(benchmark::kMillisecond)->UseRealTime()

GBSSL_PAIR(radius, radius_neighbors, 1 << 10, 1 << 14);
GBSSL_PAIR(knn, knn_batch, 1 << 10, 1 << 14);
GBSSL_PAIR(oscillation, oscillation, 1 << 10, 1 << 14);
GBSSL_PAIR(power_sum, power_difference_sum, 1 << 10, 1 << 14);

BENCHMARK(eps_graph<build_eps_graph_serial>)->Name("eps_graph/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 14)
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(eps_graph<build_eps_graph>)->Name("eps_graph/openmp")->RangeMultiplier(4)->Range(1 << 10, 1 << 14)
    ->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
