#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tileperm/detect.hpp"
#include "tileperm/normalize.hpp"
#include "tileperm/resample.hpp"
#include "tileperm/rng.hpp"
#include "tileperm/synth.hpp"

using namespace tileperm;

namespace {

Track make_track(std::size_t n_probes, std::uint64_t seed = 1) {
    Rng rng(seed);
    Track t;
    t.chrom = "chrB";
    for (std::size_t i = 0; i < n_probes; ++i) {
        t.positions.push_back(static_cast<std::int64_t>(i) * 20);
        t.gc.push_back(0.3 + 0.4 * rng.uniform01());
        t.values.push_back(rng.normal(8.0, 0.3));
    }
    return t;
}

DetectParams quick_params(std::uint32_t permutations) {
    DetectParams p;
    p.permutations = permutations;
    p.seed = 9;
    return p;
}

}  // namespace

static void BM_WindowScoresTrim(benchmark::State& state) {
    const Track track = make_track(static_cast<std::size_t>(state.range(0)));
    const auto windows = build_windows(track.positions, 1000, 10);
    std::vector<double> out(windows.size());
    for (auto _ : state) {
        window_scores(track.values, windows, TrimMode::trim_extremes, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.size()));
}
BENCHMARK(BM_WindowScoresTrim)->Arg(2000)->Arg(54236);

static void BM_WindowScoresMedian(benchmark::State& state) {
    const Track track = make_track(static_cast<std::size_t>(state.range(0)));
    const auto windows = build_windows(track.positions, 1000, 10);
    std::vector<double> out(windows.size());
    for (auto _ : state) {
        window_scores(track.values, windows, TrimMode::median, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.size()));
}
BENCHMARK(BM_WindowScoresMedian)->Arg(2000)->Arg(54236);

static void BM_PermuteWithinBins(benchmark::State& state) {
    const Track track = make_track(static_cast<std::size_t>(state.range(0)));
    const auto bins = assign_gc_bins(track.gc, 3);
    const auto members = bin_members(bins, 3);
    std::vector<double> values = track.values;
    Rng rng(4);
    for (auto _ : state) {
        permute_within_bins(values, members, rng);
        benchmark::DoNotOptimize(values.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(values.size()));
}
BENCHMARK(BM_PermuteWithinBins)->Arg(2000)->Arg(54236);

static void BM_NullExceedCounts(benchmark::State& state) {
    const Track track = make_track(static_cast<std::size_t>(state.range(0)));
    const DetectParams params = quick_params(20);
    const auto bins = assign_gc_bins(track.gc, params.gc_bins);
    const auto windows = build_windows(track.positions, params.window_size, params.min_probes);
    std::vector<double> observed(windows.size());
    window_scores(track.values, windows, params.trim_mode, observed);
    for (auto _ : state) {
        auto counts = null_exceed_counts(track, windows, bins, observed, params);
        benchmark::DoNotOptimize(counts.data());
    }
    state.SetItemsProcessed(state.iterations() * 20 *
                            static_cast<std::int64_t>(windows.size()));
}
BENCHMARK(BM_NullExceedCounts)->Arg(2000)->Arg(54236)->Unit(benchmark::kMillisecond);

static void BM_QuantileNormalize(benchmark::State& state) {
    Rng rng(2);
    const std::size_t rows = static_cast<std::size_t>(state.range(0));
    std::vector<std::vector<double>> base(3, std::vector<double>(rows));
    for (auto& c : base)
        for (double& v : c) v = rng.normal(8.0, 1.0);
    for (auto _ : state) {
        auto cols = base;
        quantile_normalize_inplace(cols);
        benchmark::DoNotOptimize(cols.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(3 * rows));
}
BENCHMARK(BM_QuantileNormalize)->Arg(2000)->Arg(542360)->Unit(benchmark::kMillisecond);

static void BM_DetectEndToEnd(benchmark::State& state) {
    const Track track = make_track(2000);
    const DetectParams params = quick_params(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        auto result = detect(track, params);
        benchmark::DoNotOptimize(result.windows.data());
    }
}
BENCHMARK(BM_DetectEndToEnd)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_SimulationTriplet(benchmark::State& state) {
    SynthConfig cfg;
    cfg.chrom = "chrB";
    cfg.region_start = 0;
    cfg.region_end = 10000;
    cfg.segments = {PlantedSegment{4000, 6000, 0.5}};
    cfg.seed = 3;
    static const DatasetBundle bundle = generate_synthetic(cfg).first;
    SimulationPlan plan;
    plan.n_sims = 1;
    plan.k = 1;
    plan.detect.permutations = 200;
    for (auto _ : state) {
        plan.master_seed += 1;
        auto batch = run_simulation_batch(bundle, plan, 1);
        benchmark::DoNotOptimize(batch.sims.data());
    }
    state.SetLabel("one sim, three detects, 498 probes");
}
BENCHMARK(BM_SimulationTriplet)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
