#include <benchmark/benchmark.h>

#include "printra/builtin_data.hpp"
#include "printra/eval.hpp"
#include "printra/models.hpp"

using namespace printra;

namespace {

DataMatrix synthetic(std::size_t n, std::size_t p, std::uint64_t seed = 1) {
    SplitMix64 rng(seed);
    DataMatrix m;
    for (std::size_t j = 0; j < p; ++j) m.feature_names.push_back("f" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        FeatureVector row(p);
        for (auto& v : row) v = rng.next_unit();
        m.rows.push_back(row);
        m.targets.push_back(5.0 + 10.0 * row[0] + rng.next_unit());
    }
    return m;
}

void bm_forest_fit(benchmark::State& state) {
    const DataMatrix m = synthetic(static_cast<std::size_t>(state.range(0)), 7);
    ForestConfig cfg;
    cfg.n_trees = 100;
    for (auto _ : state) {
        RandomForestModel rf(cfg);
        rf.fit(m);
        benchmark::DoNotOptimize(rf.tree_count());
    }
}
BENCHMARK(bm_forest_fit)->Arg(100)->Arg(400);

void bm_forest_predict(benchmark::State& state) {
    const DataMatrix m = synthetic(200, 7);
    RandomForestModel rf;
    rf.fit(m);
    FeatureVector x(7, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rf.predict(x));
    }
}
BENCHMARK(bm_forest_predict);

void bm_smo_fit(benchmark::State& state) {
    const DataMatrix m = synthetic(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) {
        SmoRegModel svr;
        svr.fit(m);
        benchmark::DoNotOptimize(svr.bias());
    }
}
BENCHMARK(bm_smo_fit)->Arg(50)->Arg(150);

void bm_linear_fit(benchmark::State& state) {
    const DataMatrix m = synthetic(400, 7);
    for (auto _ : state) {
        LinearAicModel lr;
        lr.fit(m);
        benchmark::DoNotOptimize(lr.intercept());
    }
}
BENCHMARK(bm_linear_fit);

void bm_cv_forest(benchmark::State& state) {
    const Dataset ds = build_experimental_dataset();
    ModelSpec spec;
    spec.kind = ModelKind::random_forest;
    for (auto _ : state) {
        const CvResult r = cross_validate(ds, spec, 10, kDefaultSeed);
        benchmark::DoNotOptimize(r.metrics.correlation);
    }
}
BENCHMARK(bm_cv_forest);

} // namespace

BENCHMARK_MAIN();
