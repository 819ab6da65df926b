#ifndef TILEPERM_RESAMPLE_HPP
#define TILEPERM_RESAMPLE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "tileperm/areas.hpp"
#include "tileperm/dataset.hpp"
#include "tileperm/detect.hpp"

namespace tileperm {

// How chosen replicate spots become track entries.
enum class PseudoMode {
    spots,   // each chosen replicate is its own entry at the probe position
    mean,    // one entry per probe, mean of chosen replicates
    median,  // one entry per probe, median of chosen replicates
};

// Where quantile normalization is applied: to the three pseudo-array tracks
// of each triplet (emulating the unreplicated experiment), or once to the
// three full physical spot matrices before any resampling.
enum class NormalizeScope { triplet, physical };

// Per-probe replicate choice for one simulation. The same assignment is
// applied to all three arrays of a triplet (triplicate blocking). An empty
// per-probe list means the probe is excluded from the pseudo-array.
struct ReplicateAssignment {
    std::uint64_t sim_index = 0;
    std::uint64_t seed = 0;  // derived stream seed, recorded for the manifest
    std::vector<std::vector<std::uint32_t>> chosen;  // per probe, distinct in 0..R-1
};

// Uniform k-subset per probe, drawn from a stream derived from
// (master_seed, sim_index); independent of worker scheduling. probe_mask,
// when non-empty, limits the draw to masked-in probes.
ReplicateAssignment draw_replicate_assignment(const ProbeLayout& layout, std::uint32_t k,
                                              std::uint64_t master_seed, std::uint64_t sim_index,
                                              const std::vector<std::uint8_t>* probe_mask = nullptr);

// Assembles one pseudo-array track from an array's spot values (linear or
// already-normalized, depending on the caller's scope).
Track build_pseudo_array(const SpotIntensities& spots, const ProbeLayout& layout,
                         const ReplicateAssignment& assignment, PseudoMode mode);

struct SimulationPlan {
    std::size_t n_sims = 1000;       // S
    std::uint32_t k = 1;             // replicates per probe
    PseudoMode mode = PseudoMode::spots;
    NormalizeScope scope = NormalizeScope::triplet;
    double pseudocount = 1.0;
    std::int64_t area_size = 100;
    // Default: the three detect calls of a triplet share one permutation
    // seed, so nulls differ only through the data.
    bool independent_perm_seeds = false;
    DetectParams detect;
    std::uint64_t master_seed = 0;
    std::vector<std::uint8_t> probe_mask;  // empty = all probes

    void validate(const ProbeLayout& layout) const;
};

// Detection output for one (simulation, array) cell.
struct SimArrayResult {
    std::vector<Region> regions;
    std::vector<std::uint8_t> area_bits;

    std::size_t region_count() const { return regions.size(); }
    std::int64_t called_bases() const;
};

struct SimulationBatchResult {
    AreaGrid grid;
    std::vector<std::array<SimArrayResult, 3>> sims;
    // Per sim: assignment seed, then the three detect seeds.
    std::vector<std::array<std::uint64_t, 4>> seeds;

    std::size_t n_sims() const { return sims.size(); }
};

// For sim_index in 0..S-1: draw one assignment, build the three pseudo-arrays
// from it, normalize per scope, detect, call areas. Simulations are
// independent work items; output is bit-identical for any worker count.
SimulationBatchResult run_simulation_batch(const DatasetBundle& bundle, const SimulationPlan& plan,
                                           int n_threads = 1);

}  // namespace tileperm

#endif  // TILEPERM_RESAMPLE_HPP
