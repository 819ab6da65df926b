#include "tileperm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tileperm/detect.hpp"
#include "tileperm/errors.hpp"
#include "tileperm/rng.hpp"

namespace tileperm {

void SynthConfig::validate() const {
    if (chrom.empty()) throw ValidationError("chrom must be non-empty");
    if (region_end <= region_start) throw ValidationError("region_end must exceed region_start");
    if (probe_length < 1 || tile_step < 1)
        throw ValidationError("probe_length and tile_step must be positive");
    if (region_end - region_start < probe_length)
        throw ValidationError("region shorter than one probe");
    if (n_replicates < 1) throw ValidationError("n_replicates must be at least 1");
    if (n_containers < n_replicates)
        throw ValidationError("n_containers must be at least n_replicates");
    for (const PlantedSegment& s : segments) {
        if (s.end <= s.start) throw ValidationError("empty planted segment");
        if (s.start < region_start || s.end > region_end)
            throw ValidationError("planted segment outside region");
    }
    if (noise_sd < 0 || container_sd < 0 || array_sd < 0 || probe_sd < 0)
        throw ValidationError("standard deviations must be non-negative");
    if (!(dropout_fraction >= 0.0 && dropout_fraction < 1.0))
        throw ValidationError("dropout_fraction must be in [0, 1)");
    if (area_size < 1) throw ValidationError("area_size must be positive");
}

std::pair<DatasetBundle, GroundTruth> generate_synthetic(const SynthConfig& config) {
    config.validate();
    Rng rng(derive_seed(config.seed, StreamTag::synthesis));

    const std::size_t n_tiled = static_cast<std::size_t>(
        (config.region_end - config.region_start - config.probe_length) / config.tile_step + 1);

    std::vector<double> gc(n_tiled);
    for (double& g : gc) {
        const double u = 0.3 + 0.4 * rng.uniform01();
        g = std::round(u * 1e4) / 1e4;
    }

    // exact-count dropout of whole probes (all replicates)
    const std::uint32_t n_drop = static_cast<std::uint32_t>(
        std::llround(config.dropout_fraction * static_cast<double>(n_tiled)));
    if (n_drop >= n_tiled) throw ValidationError("dropout removes every probe");
    std::vector<std::uint8_t> dropped(n_tiled, 0);
    for (std::uint32_t i : rng.sample_without_replacement(static_cast<std::uint32_t>(n_tiled), n_drop))
        dropped[i] = 1;

    const std::uint32_t R = config.n_replicates;
    const std::uint32_t C = config.n_containers;

    ProbeLayout layout;
    layout.chrom = config.chrom;
    layout.probe_length = config.probe_length;
    layout.tile_step = config.tile_step;
    layout.region_start = config.region_start;
    layout.region_end = config.region_end;
    std::vector<double> in_segment_effect;
    for (std::size_t t = 0; t < n_tiled; ++t) {
        if (dropped[t]) continue;
        const std::int64_t start =
            config.region_start + static_cast<std::int64_t>(t) * config.tile_step;
        const std::uint32_t p = static_cast<std::uint32_t>(layout.probes.size());
        layout.probes.push_back(
            Probe{"p" + std::to_string(t + 1), start, gc[t]});
        for (std::uint32_t r = 0; r < R; ++r)
            layout.spots.push_back(Spot{p, r, (p + r) % C});
        double effect = 0.0;
        for (const PlantedSegment& s : config.segments)
            if (start >= s.start && start + config.probe_length <= s.end) effect += s.effect;
        in_segment_effect.push_back(effect);
    }
    layout.n_replicates = R;
    layout.n_containers = C;
    layout.finalize();

    const std::size_t n_probes = layout.n_probes();
    std::vector<double> eta(n_probes);
    for (double& e : eta) e = rng.normal(0.0, config.probe_sd);

    std::vector<SpotIntensities> arrays(3);
    for (int a = 0; a < 3; ++a) {
        const double gamma = rng.normal(0.0, config.array_sd);
        std::vector<double> container_offset(C);
        for (double& c : container_offset) c = rng.normal(0.0, config.container_sd);

        SpotIntensities& spots = arrays[a];
        spots.array_id = "array_" + std::to_string(a + 1);
        spots.values.resize(layout.n_spots());
        for (std::size_t s = 0; s < layout.spots.size(); ++s) {
            const Spot& spot = layout.spots[s];
            const Probe& probe = layout.probes[spot.probe];
            const double y = config.baseline + config.gc_slope * (probe.gc - 0.5) +
                             in_segment_effect[spot.probe] + eta[spot.probe] + gamma +
                             container_offset[spot.container] +
                             rng.normal(0.0, config.noise_sd);
            spots.values[s] = std::exp2(y);
        }
    }

    GroundTruth truth;
    truth.segments = config.segments;
    truth.grid = area_grid(config.region_start, config.region_end, config.area_size);
    std::vector<Region> as_regions;
    for (const PlantedSegment& s : config.segments)
        as_regions.push_back(Region{s.start, s.end, s.effect, 0.0, 0.0});
    std::sort(as_regions.begin(), as_regions.end(),
              [](const Region& a, const Region& b) { return a.start < b.start; });
    truth.bits = call_areas(as_regions, truth.grid).bits;

    std::string meta = "synthetic " + config.chrom + ":" + std::to_string(config.region_start) +
                       "-" + std::to_string(config.region_end) + " seed " +
                       std::to_string(config.seed);
    return {validate_bundle(std::move(layout), std::move(arrays), std::move(meta)), std::move(truth)};
}

std::pair<double, double> score_against_truth(const AreaCalls& calls, const GroundTruth& truth) {
    if (calls.grid.region_start != truth.grid.region_start ||
        calls.grid.region_end != truth.grid.region_end ||
        calls.grid.area_size != truth.grid.area_size || calls.bits.size() != truth.bits.size())
        throw ValidationError("area grid mismatch");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t a = 0; a < calls.bits.size(); ++a) {
        if (calls.bits[a] && truth.bits[a]) ++tp;
        else if (calls.bits[a]) ++fp;
        else if (truth.bits[a]) ++fn;
    }
    const double precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    return {precision, recall};
}

}  // namespace tileperm
