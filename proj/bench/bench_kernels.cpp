#include <benchmark/benchmark.h>

#include "hcont/iterate.hpp"
#include "hcont/lineq.hpp"
#include "hcont/verify.hpp"

using namespace hcont;

namespace {

const Hypergraph& bench_graph() {
    static const Hypergraph G = random_hypergraph(13, 3, 30, 17);
    return G;
}

HarnessOptions bench_options(int jobs) {
    HarnessOptions o;
    o.seed = 17;
    o.lemma_subsets = 10;
    o.jobs = jobs;
    return o;
}

void BM_HarnessSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(full_harness_serial(bench_graph(), bench_options(1)));
}

void BM_HarnessParallel(benchmark::State& state) {
    const int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(full_harness(bench_graph(), bench_options(jobs)));
}

void BM_CollectSerial(benchmark::State& state) {
    const auto& G = bench_graph();
    const auto family = enumerate_independent_sets(G);
    ChainRunner run = [&](std::span<const Vertex> I) { return iterate_corollary(G, 0.5, 0.5, I); };
    for (auto _ : state) benchmark::DoNotOptimize(collect_containers_serial(family, run));
}

void BM_CollectParallel(benchmark::State& state) {
    const auto& G = bench_graph();
    const auto family = enumerate_independent_sets(G);
    ChainRunner run = [&](std::span<const Vertex> I) { return iterate_corollary(G, 0.5, 0.5, I); };
    const int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(collect_containers(family, run, jobs));
}

void BM_SparseSweep(benchmark::State& state) {
    const auto sys = make_system(GroundSet::integer_range(40), ap_matrix(3), ZRule::NoRepeat);
    const int jobs = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sparse_random_experiment(sys, {0.1, 0.3, 0.6}, 100, 5, jobs));
}

}  // namespace

BENCHMARK(BM_HarnessSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HarnessParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollectSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CollectParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SparseSweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
