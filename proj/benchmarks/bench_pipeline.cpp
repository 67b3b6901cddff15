// Stage-level microbenchmarks over seeded synthetic graphs.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <map>
#include <memory>

#include "faster/blocking.hpp"
#include "faster/metrics.hpp"
#include "faster/pps.hpp"
#include "faster/synthetic.hpp"
#include "faster/text_distance.hpp"

using namespace faster;

namespace {

struct Workload {
    PropertyGraph g;
    Query q;
    GroundTruth gt;
};

std::shared_ptr<Workload> make_workload(size_t entities) {
    auto dir = std::filesystem::temp_directory_path() /
               ("faster_bench_" + std::to_string(entities));
    SyntheticConfig cfg;
    cfg.n_entities = entities;
    cfg.dup_rate = 0.1;
    cfg.attr_noise = 0.3;
    cfg.seed = 7;
    SyntheticOutput out = gen_synthetic(cfg, dir.string());
    return std::make_shared<Workload>(Workload{
        PropertyGraph::load(out.nodes_path, out.edges_path),
        parse_query(out.query_path), GroundTruth::load(out.gt_path)});
}

std::shared_ptr<Workload> workload(size_t entities) {
    static std::map<size_t, std::shared_ptr<Workload>> cache;
    auto it = cache.find(entities);
    if (it == cache.end()) it = cache.emplace(entities, make_workload(entities)).first;
    return it->second;
}

} // namespace

static void BM_Stage1PatternFilter(benchmark::State& state) {
    auto w = workload(static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        auto matches = enumerate_matches(w->g, w->q.pattern, w->q.demand);
        benchmark::DoNotOptimize(matches.size());
    }
}
BENCHMARK(BM_Stage1PatternFilter)->Arg(500)->Arg(1000)->Arg(2000);

static void BM_Stage2ConstraintFilter(benchmark::State& state) {
    auto w = workload(static_cast<size_t>(state.range(0)));
    auto matches = enumerate_matches(w->g, w->q.pattern, w->q.demand);
    for (auto _ : state) {
        auto filtered = filter_matches(matches, w->q.rules, w->g);
        benchmark::DoNotOptimize(filtered.size());
    }
}
BENCHMARK(BM_Stage2ConstraintFilter)->Arg(500)->Arg(1000)->Arg(2000);

static void BM_Stage3Blocking(benchmark::State& state) {
    auto w = workload(static_cast<size_t>(state.range(0)));
    auto matches = enumerate_matches(w->g, w->q.pattern, w->q.demand);
    auto filtered = filter_matches(matches, w->q.rules, w->g);
    for (auto _ : state) {
        BlockingGraph bg = build_blocking_graph(w->g, filtered, w->q.weighting);
        auto order = sorted_profiles(bg);
        benchmark::DoNotOptimize(order.size());
    }
}
BENCHMARK(BM_Stage3Blocking)->Arg(500)->Arg(1000)->Arg(2000);

static void BM_FullPipeline(benchmark::State& state) {
    auto w = workload(static_cast<size_t>(state.range(0)));
    Matcher oracle = make_oracle_matcher(w->gt);
    uint64_t comparisons = 0;
    for (auto _ : state) {
        RunStats stats = run_pipeline(w->g, w->q, oracle, {}, {});
        comparisons = stats.comparisons;
        benchmark::DoNotOptimize(stats.emissions);
    }
    state.counters["comparisons"] = static_cast<double>(comparisons);
}
BENCHMARK(BM_FullPipeline)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_EditDistance(benchmark::State& state) {
    std::string a = "Rodriguez", b = "Rodrigues";
    for (auto _ : state) benchmark::DoNotOptimize(edit_distance(a, b));
}
BENCHMARK(BM_EditDistance);

BENCHMARK_MAIN();
