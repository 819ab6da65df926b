#ifndef TILEPERM_DATASET_HPP
#define TILEPERM_DATASET_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tileperm {

// One tiled oligo. start is a 1-based genomic position; the probe occupies
// [start, start + probe_length - 1] inclusive. All probes of a layout share
// one chromosome, stored once on the layout.
struct Probe {
    std::string id;
    std::int64_t start = 0;
    double gc = 0.0;  // fraction in [0, 1]

    bool operator==(const Probe&) const = default;
};

// One physical copy of a probe on the array.
struct Spot {
    std::uint32_t probe = 0;  // index into ProbeLayout::probes
    std::uint32_t replicate = 0;
    std::uint32_t container = 0;

    bool operator==(const Spot&) const = default;
};

// Array design: probe coordinates plus the replicate/container plan.
// Validated on construction; immutable afterwards and safe to share
// read-only across workers.
//
// Invariants: probe starts strictly increasing; every probe carries the same
// replicate count R with replicate ids exactly {0..R-1} mapped to distinct
// containers; gc in [0, 1].
struct ProbeLayout {
    std::string chrom;
    std::vector<Probe> probes;
    std::vector<Spot> spots;  // file order, grouped by probe
    std::int64_t probe_length = 50;
    std::int64_t tile_step = 20;
    // Extent of the tiled region; anchors the area grid. Defaults to the
    // probe footprint when the layout file does not state it.
    std::int64_t region_start = 0;
    std::int64_t region_end = 0;
    std::uint32_t n_replicates = 0;  // R
    std::uint32_t n_containers = 0;  // C

    std::size_t n_spots() const { return spots.size(); }
    std::size_t n_probes() const { return probes.size(); }

    // Index into spots for (probe, replicate); npos-like check not needed,
    // valid pairs are guaranteed after validation.
    std::size_t spot_index(std::uint32_t probe, std::uint32_t replicate) const {
        return spot_of_[static_cast<std::size_t>(probe) * n_replicates + replicate];
    }

    // Called by the parser / generator once all rows are in. Checks every
    // invariant and builds the (probe, replicate) -> spot table.
    void finalize();

    bool operator==(const ProbeLayout&) const = default;

  private:
    std::vector<std::uint32_t> spot_of_;
};

// Per-array signal, linear scale. values is parallel to layout.spots.
struct SpotIntensities {
    std::string array_id;
    std::vector<double> values;
};

// The triplicate experiment: one layout, three arrays of the same sample.
struct DatasetBundle {
    ProbeLayout layout;
    std::array<SpotIntensities, 3> arrays;
    std::string meta;
};

// Layout TSV: optional `#key=value` directives (probe_length, tile_step,
// region_start, region_end), then a header line
// `probe_id\tchrom\tstart\tgc\treplicate\tcontainer`, then one row per spot,
// rows grouped by probe. Throws ParseError naming the offending line.
ProbeLayout parse_layout(std::string_view text);
std::string write_layout(const ProbeLayout& layout);

// Intensity TSV: optional `#array_id=` directive, header
// `probe_id\treplicate\tvalue`, exactly one row per spot of the layout.
// default_array_id is used when the directive is absent.
SpotIntensities parse_intensities(std::string_view text, const ProbeLayout& layout,
                                  std::string_view default_array_id = {});
std::string write_intensities(const SpotIntensities& spots, const ProbeLayout& layout);

// Cross-checks exactly three complete arrays over one layout.
DatasetBundle validate_bundle(ProbeLayout layout, std::vector<SpotIntensities> arrays,
                              std::string meta = {});

}  // namespace tileperm

#endif  // TILEPERM_DATASET_HPP
