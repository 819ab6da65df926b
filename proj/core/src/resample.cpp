#include "tileperm/resample.hpp"

#include <algorithm>
#include <cmath>

#include "tileperm/errors.hpp"
#include "tileperm/normalize.hpp"
#include "tileperm/parallel.hpp"
#include "tileperm/rng.hpp"

namespace tileperm {

ReplicateAssignment draw_replicate_assignment(const ProbeLayout& layout, std::uint32_t k,
                                              std::uint64_t master_seed, std::uint64_t sim_index,
                                              const std::vector<std::uint8_t>* probe_mask) {
    const std::uint32_t R = layout.n_replicates;
    if (k < 1 || k > R) throw ValidationError("k out of range 1.." + std::to_string(R));
    const std::size_t n = layout.n_probes();
    if (probe_mask && !probe_mask->empty() && probe_mask->size() != n)
        throw ValidationError("probe mask length mismatch");

    ReplicateAssignment assignment;
    assignment.sim_index = sim_index;
    assignment.seed = derive_seed(master_seed, StreamTag::replicate_assignment, sim_index);
    assignment.chosen.resize(n);
    Rng rng(assignment.seed);
    for (std::size_t p = 0; p < n; ++p) {
        if (probe_mask && !probe_mask->empty() && !(*probe_mask)[p]) continue;
        auto chosen = rng.sample_without_replacement(R, k);
        std::sort(chosen.begin(), chosen.end());
        assignment.chosen[p] = std::move(chosen);
    }
    return assignment;
}

Track build_pseudo_array(const SpotIntensities& spots, const ProbeLayout& layout,
                         const ReplicateAssignment& assignment, PseudoMode mode) {
    const std::size_t n = layout.n_probes();
    if (assignment.chosen.size() != n) throw ValidationError("assignment does not match layout");

    Track track;
    track.chrom = layout.chrom;
    std::vector<double> picked;
    for (std::size_t p = 0; p < n; ++p) {
        const auto& chosen = assignment.chosen[p];
        if (chosen.empty()) continue;
        const Probe& probe = layout.probes[p];
        if (mode == PseudoMode::spots) {
            for (std::uint32_t r : chosen) {
                track.positions.push_back(probe.start);
                track.gc.push_back(probe.gc);
                track.values.push_back(spots.values[layout.spot_index(p, r)]);
            }
            continue;
        }
        picked.clear();
        for (std::uint32_t r : chosen) picked.push_back(spots.values[layout.spot_index(p, r)]);
        double v;
        if (mode == PseudoMode::mean) {
            double sum = 0.0;
            for (double x : picked) sum += x;
            v = sum / static_cast<double>(picked.size());
        } else {
            const std::size_t m = picked.size() / 2;
            std::nth_element(picked.begin(), picked.begin() + m, picked.end());
            v = picked[m];
            if (picked.size() % 2 == 0) {
                const double lower = *std::max_element(picked.begin(), picked.begin() + m);
                v = (v + lower) / 2.0;
            }
        }
        track.positions.push_back(probe.start);
        track.gc.push_back(probe.gc);
        track.values.push_back(v);
    }
    return track;
}

void SimulationPlan::validate(const ProbeLayout& layout) const {
    if (n_sims < 1) throw ValidationError("n_sims must be at least 1");
    if (k < 1 || k > layout.n_replicates)
        throw ValidationError("k out of range 1.." + std::to_string(layout.n_replicates));
    if (!(pseudocount > 0.0)) throw ValidationError("pseudocount must be positive");
    if (area_size < 1) throw ValidationError("area_size must be positive");
    detect.validate(layout.probe_length);
    if (!probe_mask.empty()) {
        if (probe_mask.size() != layout.n_probes())
            throw ValidationError("probe mask length mismatch");
        if (std::find(probe_mask.begin(), probe_mask.end(), std::uint8_t{1}) == probe_mask.end())
            throw ValidationError("probe mask excludes every probe");
    }
}

std::int64_t SimArrayResult::called_bases() const {
    std::int64_t total = 0;
    for (const Region& r : regions) total += r.end - r.start;
    return total;
}

SimulationBatchResult run_simulation_batch(const DatasetBundle& bundle, const SimulationPlan& plan,
                                           int n_threads) {
    const ProbeLayout& layout = bundle.layout;
    plan.validate(layout);

    SimulationBatchResult batch;
    batch.grid = area_grid(layout.region_start, layout.region_end, plan.area_size);
    batch.sims.resize(plan.n_sims);
    batch.seeds.resize(plan.n_sims);

    // Physical scope normalizes the three full spot matrices once; every
    // pseudo-array then aggregates already log-normalized values.
    std::array<SpotIntensities, 3> physical;
    if (plan.scope == NormalizeScope::physical) {
        std::vector<std::vector<double>> columns;
        columns.reserve(3);
        for (int j = 0; j < 3; ++j) {
            physical[j].array_id = bundle.arrays[j].array_id;
            columns.push_back(bundle.arrays[j].values);
            log2_transform_inplace(columns.back(), plan.pseudocount);
        }
        quantile_normalize_inplace(columns);
        for (int j = 0; j < 3; ++j) physical[j].values = std::move(columns[j]);
    }

    parallel_for(plan.n_sims, n_threads, [&](std::size_t i) {
        const std::vector<std::uint8_t>* mask = plan.probe_mask.empty() ? nullptr : &plan.probe_mask;
        const ReplicateAssignment assignment =
            draw_replicate_assignment(layout, plan.k, plan.master_seed, i, mask);

        std::array<std::uint64_t, 4> seed_row;
        seed_row[0] = assignment.seed;
        for (int j = 0; j < 3; ++j) {
            seed_row[1 + j] =
                plan.independent_perm_seeds
                    ? derive_seed(plan.master_seed, StreamTag::permutation, i,
                                  static_cast<std::uint64_t>(1 + j))
                    : derive_seed(plan.master_seed, StreamTag::permutation, i);
        }
        batch.seeds[i] = seed_row;

        std::array<Track, 3> tracks;
        if (plan.scope == NormalizeScope::triplet) {
            std::vector<std::vector<double>> columns(3);
            for (int j = 0; j < 3; ++j) {
                tracks[j] = build_pseudo_array(bundle.arrays[j], layout, assignment, plan.mode);
                log2_transform_inplace(tracks[j].values, plan.pseudocount);
                columns[j] = std::move(tracks[j].values);
            }
            quantile_normalize_inplace(columns);
            for (int j = 0; j < 3; ++j) tracks[j].values = std::move(columns[j]);
        } else {
            for (int j = 0; j < 3; ++j)
                tracks[j] = build_pseudo_array(physical[j], layout, assignment, plan.mode);
        }

        for (int j = 0; j < 3; ++j) {
            DetectParams params = plan.detect;
            params.seed = seed_row[1 + j];
            DetectionResult result = detect(tracks[j], params, 1);
            SimArrayResult& cell = batch.sims[i][j];
            cell.area_bits = call_areas(result.regions, batch.grid).bits;
            cell.regions = std::move(result.regions);
        }
    });

    return batch;
}

}  // namespace tileperm
