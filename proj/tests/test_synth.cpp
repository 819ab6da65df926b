#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "tileperm/dataset.hpp"
#include "tileperm/detect.hpp"
#include "tileperm/errors.hpp"
#include "tileperm/synth.hpp"

using namespace tileperm;

namespace {

SynthConfig quiet_config() {
    SynthConfig cfg;
    cfg.region_start = 0;
    cfg.region_end = 5000;
    cfg.n_replicates = 3;
    cfg.n_containers = 3;
    cfg.noise_sd = 0;
    cfg.container_sd = 0;
    cfg.array_sd = 0;
    cfg.probe_sd = 0;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    SynthConfig cfg = quiet_config();
    cfg.noise_sd = -0.1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = quiet_config();
    cfg.dropout_fraction = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = quiet_config();
    cfg.n_containers = 2;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = quiet_config();
    cfg.segments = {PlantedSegment{4000, 6000, 1.0}};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = quiet_config();
    cfg.region_end = cfg.region_start;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = quiet_config();
    cfg.segments = {PlantedSegment{3000, 3000, 1.0}};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("all variances zero gives constant intensities") {
    const auto [bundle, truth] = generate_synthetic(quiet_config());
    const double expect = std::exp2(8.0);
    for (const auto& array : bundle.arrays)
        for (double v : array.values) CHECK(v == expect);
}

TEST_CASE("a unit effect exactly doubles in-segment spots") {
    SynthConfig cfg = quiet_config();
    cfg.segments = {PlantedSegment{1000, 2000, 1.0}};
    const auto [bundle, truth] = generate_synthetic(cfg);
    const ProbeLayout& layout = bundle.layout;
    const double base = std::exp2(8.0);
    for (std::size_t s = 0; s < layout.spots.size(); ++s) {
        const Probe& p = layout.probes[layout.spots[s].probe];
        const bool inside = p.start >= 1000 && p.start + layout.probe_length <= 2000;
        CHECK(bundle.arrays[0].values[s] == (inside ? 2.0 * base : base));
    }
}

TEST_CASE("probe count follows the tiling formula") {
    SynthConfig cfg = quiet_config();
    cfg.region_end = 5010;
    const auto [bundle, truth] = generate_synthetic(cfg);
    // floor((5010 - 50) / 20) + 1
    CHECK(bundle.layout.n_probes() == 249);
    CHECK(bundle.layout.probes.front().start == 0);
    CHECK(bundle.layout.probes.back().start == 4960);
    CHECK(bundle.layout.n_spots() == 249 * 3);
}

TEST_CASE("dropout removes an exact probe count") {
    SynthConfig cfg = quiet_config();
    cfg.region_end = 20050;  // 1001 probes
    cfg.dropout_fraction = 0.25;
    const auto [bundle, truth] = generate_synthetic(cfg);
    // 1001 - round(0.25 * 1001) = 1001 - 250
    CHECK(bundle.layout.n_probes() == 751);
    // spacing is still a multiple of the step and starts stay sorted
    for (std::size_t p = 1; p < bundle.layout.n_probes(); ++p) {
        const auto gap = bundle.layout.probes[p].start - bundle.layout.probes[p - 1].start;
        CHECK(gap > 0);
        CHECK(gap % 20 == 0);
    }
}

TEST_CASE("generation is seed-deterministic") {
    SynthConfig cfg = quiet_config();
    cfg.noise_sd = 0.3;
    cfg.array_sd = 0.2;
    cfg.seed = 1234;
    const auto [a, ta] = generate_synthetic(cfg);
    const auto [b, tb] = generate_synthetic(cfg);
    CHECK(a.layout == b.layout);
    for (int j = 0; j < 3; ++j) CHECK(a.arrays[j].values == b.arrays[j].values);

    cfg.seed = 1235;
    const auto [c, tc] = generate_synthetic(cfg);
    CHECK(a.arrays[0].values != c.arrays[0].values);
}

TEST_CASE("gc values live in [0.3, 0.7] at 4 decimals") {
    SynthConfig cfg = quiet_config();
    cfg.seed = 9;
    const auto [bundle, truth] = generate_synthetic(cfg);
    for (const Probe& p : bundle.layout.probes) {
        CHECK(p.gc >= 0.3);
        CHECK(p.gc <= 0.7);
        // rounding to 4 decimals is idempotent, so re-rounding is a no-op
        CHECK(p.gc == std::round(p.gc * 1e4) / 1e4);
    }
}

TEST_CASE("gc slope shows up in the signal") {
    SynthConfig cfg = quiet_config();
    cfg.gc_slope = 2.0;
    cfg.seed = 31;
    const auto [bundle, truth] = generate_synthetic(cfg);
    const ProbeLayout& layout = bundle.layout;
    for (std::size_t s = 0; s < layout.spots.size(); ++s) {
        const Probe& p = layout.probes[layout.spots[s].probe];
        const double expect = std::exp2(8.0 + 2.0 * (p.gc - 0.5));
        CHECK(bundle.arrays[0].values[s] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("replicates of a probe occupy distinct containers") {
    SynthConfig cfg = quiet_config();
    cfg.n_replicates = 3;
    cfg.n_containers = 5;
    const auto [bundle, truth] = generate_synthetic(cfg);
    const ProbeLayout& layout = bundle.layout;
    for (std::size_t p = 0; p < layout.n_probes(); ++p) {
        std::set<std::uint32_t> containers;
        for (std::uint32_t r = 0; r < layout.n_replicates; ++r)
            containers.insert(layout.spots[layout.spot_index(p, r)].container);
        CHECK(containers.size() == layout.n_replicates);
    }
}

TEST_CASE("generated layout survives the parser round-trip") {
    SynthConfig cfg = quiet_config();
    cfg.noise_sd = 0.2;
    cfg.seed = 77;
    const auto [bundle, truth] = generate_synthetic(cfg);
    const ProbeLayout parsed = parse_layout(write_layout(bundle.layout));
    CHECK(parsed == bundle.layout);
    const SpotIntensities back = parse_intensities(
        write_intensities(bundle.arrays[0], bundle.layout), bundle.layout);
    CHECK(back.values == bundle.arrays[0].values);
}

TEST_CASE("truth bits mark fully covered areas") {
    SynthConfig cfg = quiet_config();
    cfg.region_end = 10000;
    cfg.segments = {PlantedSegment{1000, 2050, 1.0}};
    const auto [bundle, truth] = generate_synthetic(cfg);
    REQUIRE(truth.grid.n_areas == 100);
    for (std::size_t a = 0; a < truth.grid.n_areas; ++a)
        CHECK(truth.bits[a] == (a >= 10 && a <= 19 ? 1 : 0));
}

TEST_CASE("precision and recall conventions") {
    GroundTruth truth;
    truth.grid = area_grid(0, 500, 100);
    truth.bits = {1, 1, 0, 0, 0};

    AreaCalls calls;
    calls.grid = truth.grid;

    calls.bits = {1, 1, 0, 0, 0};
    CHECK(score_against_truth(calls, truth) == std::pair{1.0, 1.0});

    calls.bits = {0, 0, 0, 0, 0};
    CHECK(score_against_truth(calls, truth) == std::pair{1.0, 0.0});

    calls.bits = {0, 0, 1, 1, 1};  // exact complement
    CHECK(score_against_truth(calls, truth) == std::pair{0.0, 0.0});

    calls.bits = {1, 0, 1, 0, 0};
    const auto [precision, recall] = score_against_truth(calls, truth);
    CHECK(precision == 0.5);
    CHECK(recall == 0.5);

    AreaCalls mismatched;
    mismatched.grid = area_grid(0, 400, 100);
    mismatched.bits = {0, 0, 0, 0};
    CHECK_THROWS_AS(score_against_truth(mismatched, truth), ValidationError);
}

TEST_CASE("noise-free plant makes every interior window significant") {
    SynthConfig cfg = quiet_config();
    cfg.region_end = 30000;
    cfg.n_replicates = 1;
    cfg.n_containers = 1;
    cfg.segments = {PlantedSegment{10000, 14000, 3.0}};
    cfg.seed = 2;
    const auto [bundle, truth] = generate_synthetic(cfg);

    Track track;
    track.chrom = bundle.layout.chrom;
    for (std::size_t s = 0; s < bundle.layout.spots.size(); ++s) {
        const Probe& p = bundle.layout.probes[bundle.layout.spots[s].probe];
        track.positions.push_back(p.start);
        track.gc.push_back(p.gc);
        track.values.push_back(std::log2(bundle.arrays[0].values[s] + 1.0));
    }

    DetectParams params;
    params.permutations = 100;
    params.seed = 5;
    const DetectionResult result = detect(track, params);

    REQUIRE(result.regions.size() == 1);
    // fully covered windows all reach significance and sit inside the region
    for (const auto& w : result.windows) {
        if (w.start >= 10000 && w.end <= 14000) {
            CHECK(w.q < params.alpha);
            CHECK(w.start >= result.regions[0].start);
            CHECK(w.end <= result.regions[0].end);
        }
    }
    CHECK(result.regions[0].start >= 10000 - params.window_size);
    CHECK(result.regions[0].end <= 14000 + params.window_size);
}
