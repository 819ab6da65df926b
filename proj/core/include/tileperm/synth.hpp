#ifndef TILEPERM_SYNTH_HPP
#define TILEPERM_SYNTH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "tileperm/areas.hpp"
#include "tileperm/dataset.hpp"

namespace tileperm {

// A genomic interval [start, end) carrying a log2 expression effect.
struct PlantedSegment {
    std::int64_t start = 0;
    std::int64_t end = 0;
    double effect = 0.0;
};

// Generator for replicated-probe datasets with known expressed segments.
// Log2 signal for array a, probe p, replicate r:
//   Y = baseline + gc_slope*(gc_p - 0.5) + effect*[p in segment]
//       + eta_p + gamma_a + c_{a,container(r)} + eps_{a,p,r}
// with eta ~ N(0, probe_sd^2) shared across arrays and replicates,
// gamma ~ N(0, array_sd^2), c ~ N(0, container_sd^2) per (array, container)
// and eps ~ N(0, noise_sd^2) per spot. Intensities are emitted on the linear
// scale (2^Y) so the standard ingestion path applies.
struct SynthConfig {
    std::string chrom = "chr8";
    std::int64_t region_start = 127640000;
    std::int64_t region_end = 129120000;
    std::int64_t tile_step = 20;
    std::int64_t probe_length = 50;
    std::uint32_t n_replicates = 10;  // R
    std::uint32_t n_containers = 10;  // C, must be >= R
    std::vector<PlantedSegment> segments;
    double baseline = 8.0;  // mu0, log2 units
    double gc_slope = 0.0;
    double noise_sd = 0.3;      // sigma, per spot
    double container_sd = 0.1;  // sigma_c, per (array, container)
    double array_sd = 0.2;      // sigma_a, per array
    double probe_sd = 0.2;      // sigma_p, shared across arrays/replicates
    // Fraction of probes removed uniformly at random (all replicates),
    // emulating sequence-based design filtering. Exactly
    // round(fraction * n_probes) probes are dropped.
    double dropout_fraction = 0.0;
    std::uint64_t seed = 0;
    std::int64_t area_size = 100;

    void validate() const;
};

// Planted segments plus their area-level truth bits on the standard grid.
struct GroundTruth {
    std::vector<PlantedSegment> segments;
    AreaGrid grid;
    std::vector<std::uint8_t> bits;  // area fully inside a planted segment
};

// Deterministic given config.seed. The bundle passes dataset validation for
// any valid config.
std::pair<DatasetBundle, GroundTruth> generate_synthetic(const SynthConfig& config);

// Area-level precision/recall of calls against truth. Precision is 1 when
// nothing is called; recall is 1 when truth is empty. Grids must match.
std::pair<double, double> score_against_truth(const AreaCalls& calls, const GroundTruth& truth);

}  // namespace tileperm

#endif  // TILEPERM_SYNTH_HPP
