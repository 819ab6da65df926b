// Acceptance gate: one test case per release criterion, each printing a
// single [PASS]/[FAIL] line with its runtime. Numbers that are free choices
// here (effect sizes, seeds, window settings) were fixed once against the
// implementation and are not tuned per run.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "tileperm/dataset.hpp"
#include "tileperm/detect.hpp"
#include "tileperm/io.hpp"
#include "tileperm/metrics.hpp"
#include "tileperm/normalize.hpp"
#include "tileperm/resample.hpp"
#include "tileperm/rng.hpp"
#include "tileperm/synth.hpp"
#include "test_util.hpp"

using namespace tileperm;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void report(int n, const char* label, bool ok, double secs, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%.1f s) %s\n", ok ? "PASS" : "FAIL", n, label, secs,
                detail.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion " << n << " (" << label << "): " << detail);
}

// Raw per-spot log2 track of one array, bypassing the pseudocount so the
// values are exactly the generator's log2 signal.
Track raw_track(const DatasetBundle& bundle, std::size_t array_index) {
    Track t;
    t.chrom = bundle.layout.chrom;
    for (std::size_t s = 0; s < bundle.layout.spots.size(); ++s) {
        const Probe& p = bundle.layout.probes[bundle.layout.spots[s].probe];
        t.positions.push_back(p.start);
        t.gc.push_back(p.gc);
        t.values.push_back(std::log2(bundle.arrays[array_index].values[s]));
    }
    return t;
}

// 2000 unreplicated probes over [0, 40030), iid per-spot noise only.
SynthConfig flat_config(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.chrom = "chrS";
    cfg.region_start = 0;
    cfg.region_end = 40030;
    cfg.n_replicates = 1;
    cfg.n_containers = 1;
    cfg.noise_sd = 0.3;
    cfg.container_sd = 0.0;
    cfg.array_sd = 0.0;
    cfg.probe_sd = 0.0;
    cfg.seed = seed;
    return cfg;
}

// Replicated noisy bundle shared by the consistency-ordering, sweep and
// arithmetic criteria: 498 probes with 10 replicate spots each, one
// moderate-effect segment, realistic noise layers.
SynthConfig noisy_config() {
    SynthConfig cfg;
    cfg.chrom = "chrS";
    cfg.region_start = 0;
    cfg.region_end = 10000;
    cfg.n_replicates = 10;
    cfg.n_containers = 10;
    cfg.segments = {PlantedSegment{4000, 6000, 0.25}};
    cfg.noise_sd = 0.3;
    cfg.container_sd = 0.1;
    cfg.array_sd = 0.2;
    cfg.probe_sd = 0.0;
    cfg.seed = 42;
    return cfg;
}

const DatasetBundle& noisy_bundle() {
    static const DatasetBundle bundle = generate_synthetic(noisy_config()).first;
    return bundle;
}

SimulationPlan noisy_plan(std::size_t n_sims) {
    SimulationPlan plan;
    plan.n_sims = n_sims;
    plan.k = 1;
    plan.mode = PseudoMode::spots;
    plan.area_size = 100;
    plan.detect.permutations = 200;
    plan.master_seed = 7;
    return plan;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    auto ranks = [n](std::span<const double> v) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            double less = 0, equal = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j] < v[i]) ++less;
                else if (v[j] == v[i]) ++equal;
            }
            r[i] = less + (equal + 1.0) / 2.0;
        }
        return r;
    };
    const std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) mx += rx[i], my += ry[i];
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("criterion 1") {
    Timer t;
    Rng rng(20240501);
    const std::size_t rows = 500;
    std::vector<std::vector<double>> cols(3, std::vector<double>(rows));
    for (auto& c : cols)
        for (double& v : c) v = 6.0 + 4.0 * rng.uniform01();

    std::vector<std::vector<double>> sorted = cols;
    for (auto& c : sorted) std::sort(c.begin(), c.end());
    std::vector<double> target(rows);
    for (std::size_t i = 0; i < rows; ++i)
        target[i] = (sorted[0][i] + sorted[1][i] + sorted[2][i]) / 3.0;

    quantile_normalize_inplace(cols);
    double max_dev = 0.0;
    for (const auto& c : cols) {
        std::vector<double> s = c;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < rows; ++i)
            max_dev = std::max(max_dev, std::abs(s[i] - target[i]));
    }
    const std::vector<std::vector<double>> once = cols;
    quantile_normalize_inplace(cols);
    const bool idempotent = cols == once;
    const double secs = t.s();
    report(1, "quantile normalization exactness", max_dev <= 1e-12 && idempotent && secs < 1.0,
           secs, "max deviation " + num(max_dev) + (idempotent ? ", idempotent" : ", NOT idempotent"));
}

TEST_CASE("criterion 2") {
    Timer t;
    double mean_fraction = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const DatasetBundle bundle = generate_synthetic(flat_config(seed)).first;
        const Track track = raw_track(bundle, 0);
        DetectParams params;
        params.permutations = 200;
        params.seed = 100 + seed;
        const DetectionResult result = detect(track, params);
        std::size_t low = 0;
        for (const WindowStat& w : result.windows) low += w.p < 0.05;
        mean_fraction += static_cast<double>(low) / static_cast<double>(result.windows.size());
    }
    mean_fraction /= 5.0;
    const double secs = t.s();
    report(2, "null calibration",
           mean_fraction >= 0.02 && mean_fraction <= 0.09 && secs < 60.0, secs,
           "mean fraction of windows with p<0.05 = " + num(mean_fraction) + " (target [0.02, 0.09])");
}

TEST_CASE("criterion 3") {
    Timer t;
    double mean_precision = 0.0, mean_recall = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthConfig cfg = flat_config(seed);
        cfg.segments = {PlantedSegment{20000, 22000, 0.9}};
        const auto [bundle, truth] = generate_synthetic(cfg);
        const Track track = raw_track(bundle, 0);
        DetectParams params;
        params.window_size = 200;
        params.min_probes = 5;
        params.permutations = 200;
        params.alpha = 0.05;
        params.seed = 200 + seed;
        const DetectionResult result = detect(track, params);
        const AreaCalls calls = call_areas(result.regions, truth.grid);
        const auto [precision, recall] = score_against_truth(calls, truth);
        mean_precision += precision;
        mean_recall += recall;
    }
    mean_precision /= 5.0;
    mean_recall /= 5.0;
    const double secs = t.s();
    report(3, "planted segment recovery",
           mean_recall >= 0.9 && mean_precision >= 0.8 && secs < 60.0, secs,
           "recall " + num(mean_recall) + " (>=0.9), precision " + num(mean_precision) +
               " (>=0.8)");
}

#ifdef TILEPERM_BIN
TEST_CASE("criterion 4") {
    Timer t;
    test_util::TempDir dir("accept_det");
    const std::string data = dir.str("data");
    bool ok = test_util::run_cli(
                  "synth --chrom chrS --region-start 0 --region-end 10000 --tile-step 20"
                  " --probe-length 50 --replicates 4 --containers 4"
                  " --segment 4000:6000:0.8 --dropout 0 --seed 11 --out " + data) == 0;
    const std::string cmd =
        "table1 --layout " + data + "/layout.tsv --intensities " + data + "/array_1.tsv " +
        data + "/array_2.tsv " + data + "/array_3.tsv" +
        " --sims 20 --permutations 100 --area-size 100 --seed 6 ";
    ok = ok && test_util::run_cli(cmd + "--threads 1 --out " + dir.str("t1")) == 0;
    ok = ok && test_util::run_cli(cmd + "--threads 8 --out " + dir.str("t8")) == 0;
    ok = ok && test_util::run_cli(cmd + "--threads 1 --out " + dir.str("t1b")) == 0;
    std::string detail = "CLI run failed";
    if (ok) {
        const std::string a = read_file(dir.str("t1") + "/table1.tsv");
        const std::string b = read_file(dir.str("t8") + "/table1.tsv");
        const std::string c = read_file(dir.str("t1b") + "/table1.tsv");
        ok = a == b && a == c;
        detail = ok ? "1 vs 8 threads and repeat run byte-identical"
                    : "outputs differ across threads or reruns";
    }
    const double secs = t.s();
    report(4, "deterministic consistency table", ok && secs < 300.0, secs, detail);
}
#endif

TEST_CASE("criterion 5") {
    Timer t;
    SynthConfig cfg = noisy_config();
    cfg.segments = {PlantedSegment{4000, 6000, 1.2}};
    cfg.n_replicates = 4;
    cfg.n_containers = 4;
    DatasetBundle bundle = generate_synthetic(cfg).first;
    bundle.arrays[1].values = bundle.arrays[0].values;
    bundle.arrays[2].values = bundle.arrays[0].values;

    SimulationPlan plan = noisy_plan(10);
    plan.detect.permutations = 100;
    const SimulationBatchResult batch = run_simulation_batch(bundle, plan, 1);

    bool triples_identical = true;
    for (const auto& sim : batch.sims)
        for (int j = 1; j < 3; ++j)
            triples_identical = triples_identical && sim[j].area_bits == sim[0].area_bits;

    const ConsistencyRow row = consistency_row(batch, Strategy::one_rep);
    bool all_three = row.n_sims_used > 0;
    for (const auto& triple : row.per_sim)
        all_three = all_three && triple[0] == 0.0 && triple[1] == 0.0 && triple[2] == 1.0;
    const double secs = t.s();
    report(5, "triplicate blocking degeneracy", triples_identical && all_three, secs,
           "identical arrays give identical area calls; one-rep row = (0, 0, 1) on " +
               std::to_string(row.n_sims_used) + " sims");
}

TEST_CASE("criterion 6") {
    Timer t;
    const DatasetBundle& bundle = noisy_bundle();
    const SimulationPlan plan = noisy_plan(50);
    const StrategyParams sp;
    const SimulationBatchResult one_rep = apply_strategy(bundle, plan, Strategy::one_rep, sp, 1);
    const SimulationBatchResult all_ten = apply_strategy(bundle, plan, Strategy::all_ten, sp, 1);
    const ConsistencyRow row_one = consistency_row(one_rep, Strategy::one_rep);
    const ConsistencyRow row_all = consistency_row(all_ten, Strategy::all_ten);
    const bool ok = row_one.n_sims_used > 0 && row_all.n_sims_used > 0 &&
                    row_all.exactly_three > row_one.exactly_three;
    const double secs = t.s();
    report(6, "full replication beats single spots", ok && secs < 600.0, secs,
           "exactly_three all-ten " + num(row_all.exactly_three) + " vs one-rep " +
               num(row_one.exactly_three));
}

TEST_CASE("criterion 7") {
    Timer t;
    const DatasetBundle& bundle = noisy_bundle();
    const SimulationPlan plan = noisy_plan(20);
    const std::vector<std::uint32_t> ks = {1, 2, 4, 10};
    const SweepResult sweep = replicate_sweep(bundle, plan, ks);

    bool nested = true;
    std::vector<double> kv, p1;
    for (std::size_t i = 0; i < sweep.ks.size(); ++i) {
        const auto& p = sweep.proportions[i];
        nested = nested && p[0] >= p[1] && p[1] >= p[2];
        kv.push_back(sweep.ks[i]);
        p1.push_back(p[0]);
    }
    const double rho = spearman(kv, p1);
    const double secs = t.s();
    report(7, "replication sweep direction", nested && rho >= 0.9, secs,
           "nesting " + std::string(nested ? "exact" : "violated") + ", spearman(k, p_ge1) = " +
               num(rho) + " on p_ge1 = {" + num(p1[0]) + ", " + num(p1[1]) + ", " + num(p1[2]) +
               ", " + num(p1[3]) + "}");
}

TEST_CASE("criterion 8") {
    Timer t;
    const DatasetBundle& bundle = noisy_bundle();
    SimulationPlan plan = noisy_plan(20);
    plan.detect.permutations = 100;
    const SimulationBatchResult batch = run_simulation_batch(bundle, plan, 1);

    const ConsistencyRow row = consistency_row(batch, Strategy::one_rep);
    double worst = 0.0;
    for (const auto& triple : row.per_sim)
        worst = std::max(worst, std::abs(triple[0] + triple[1] + triple[2] - 1.0));

    const FrequencyTrack track = selection_frequency(batch, 0);
    bool bounded = track.n_sims == plan.n_sims;
    for (std::uint32_t c : track.counts) bounded = bounded && c <= plan.n_sims;

    const std::vector<double> smoothed = smooth_track(track.counts, 1);
    bool identity = smoothed.size() == track.counts.size();
    for (std::size_t i = 0; identity && i < smoothed.size(); ++i)
        identity = smoothed[i] == static_cast<double>(track.counts[i]);
    const double secs = t.s();
    report(8, "consistency row arithmetic",
           row.n_sims_used > 0 && worst <= 1e-12 && bounded && identity, secs,
           "max |sum-1| = " + num(worst) + ", counts bounded by S, window-1 smoothing is identity");
}

#ifdef TILEPERM_BIN
TEST_CASE("criterion 9") {
    Timer t;
    test_util::TempDir dir("accept_cap");
    const std::string data = dir.str("data");
    bool ok = test_util::run_cli(
                  "synth --replicates 10 --containers 10 --dropout 0.26706 --seed 1"
                  " --segment 128000000:128040000:0.8 --out " + data) == 0;
    std::size_t probes = 0;
    if (ok) {
        probes = parse_layout(read_file(data + "/layout.tsv")).probes.size();
        ok = probes == 54236;
    }
    double sim_secs = 0.0;
    if (ok) {
        Timer sim;
        ok = test_util::run_cli(
                 "simulate --layout " + data + "/layout.tsv --intensities " + data +
                 "/array_1.tsv " + data + "/array_2.tsv " + data + "/array_3.tsv" +
                 " --sims 2 --k 1 --permutations 1000 --window-size 1000 --area-size 100"
                 " --seed 3 --out " + dir.str("batch")) == 0;
        sim_secs = sim.s();
        ok = ok && sim_secs < 1800.0;
    }
    const double secs = t.s();
    report(9, "chromosome-scale capacity run", ok, secs,
           std::to_string(probes) + " probes, simulate took " + num(sim_secs) +
               " s (limit 1800)");
}
#endif
