#ifndef TILEPERM_DETECT_HPP
#define TILEPERM_DETECT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tileperm/rng.hpp"

namespace tileperm {

// Window summary statistic: arithmetic mean with one max and one min removed,
// or the plain median (mean of the central pair for even lengths).
enum class TrimMode { trim_extremes, median };

// Multiplicity adjustment over window p-values / scores.
enum class MtcMethod { empirical_fdr, bh };

struct DetectParams {
    std::int64_t window_size = 1000;  // W, bases; also the minimum region length
    std::uint32_t permutations = 1000;
    std::uint32_t gc_bins = 3;
    TrimMode trim_mode = TrimMode::trim_extremes;
    std::size_t min_probes = 10;  // windows with fewer members are dropped
    double alpha = 0.05;
    MtcMethod mtc_method = MtcMethod::empirical_fdr;
    std::uint64_t seed = 0;
    std::int64_t merge_gap = 0;  // regions closer than this merge; 0 = overlap-or-abut

    // Throws ValidationError on out-of-range fields. probe_length bounds W
    // from below.
    void validate(std::int64_t probe_length) const;
};

// One expression track: parallel vectors over track entries. Entries at the
// same position are allowed (replicate spots) and act as independent window
// members.
struct Track {
    std::string chrom;
    std::vector<std::int64_t> positions;  // non-decreasing
    std::vector<double> gc;
    std::vector<double> values;

    std::size_t size() const { return positions.size(); }
};

// Candidate window: genomic interval [start, start + W) and the member entry
// range [first, last) it covers.
struct WindowRange {
    std::int64_t start = 0;
    std::uint32_t first = 0;
    std::uint32_t last = 0;
};

struct WindowStat {
    std::int64_t start = 0;
    std::int64_t end = 0;
    std::uint32_t first = 0;
    std::uint32_t last = 0;
    double score = 0.0;
    double p = 1.0;
    double q = 1.0;
};

// Maximal union of significant windows. Length is always >= W.
struct Region {
    std::int64_t start = 0;
    std::int64_t end = 0;
    double max_score = 0.0;
    double min_p = 1.0;
    double min_q = 1.0;
};

struct DetectionResult {
    std::vector<WindowStat> windows;
    std::vector<Region> regions;
    DetectParams params;
};

// Equal-frequency GC bins: probes are ranked by GC (stable, ties by entry
// order) and cut into `bins` contiguous rank blocks whose sizes differ by at
// most one. Throws ValidationError if bins exceeds the entry count.
std::vector<std::uint32_t> assign_gc_bins(std::span<const double> gc, std::uint32_t bins);

// Member index lists per bin, in entry order.
std::vector<std::vector<std::uint32_t>> bin_members(std::span<const std::uint32_t> bins,
                                                    std::uint32_t n_bins);

// One candidate window anchored at each distinct entry position; members are
// entries with position in [anchor, anchor + window_size). Windows with fewer
// than min_probes members are dropped; consecutive anchors producing the same
// member range are deduplicated.
std::vector<WindowRange> build_windows(std::span<const std::int64_t> positions,
                                       std::int64_t window_size, std::size_t min_probes);

// Score of a single member set. Throws ValidationError when values are too
// few for the mode (3 for trim_extremes, 1 for median).
double window_score(std::span<const double> values, TrimMode mode);

// Scores for every window of a track in one pass (prefix sums plus monotonic
// deques for trim_extremes; per-window selection for median).
void window_scores(std::span<const double> values, std::span<const WindowRange> windows,
                   TrimMode mode, std::span<double> out);

// Shuffles values uniformly at random within each bin's member set;
// entries outside every bin (none in practice) are untouched.
void permute_within_bins(std::span<double> values,
                         const std::vector<std::vector<std::uint32_t>>& members, Rng& rng);

// The pooled permutation null: all window scores from `permutations`
// independent within-bin shuffles, sorted ascending. Size is always
// permutations * windows.size(). Intended for tests and small runs; detect()
// uses an exact rank-count path with the same arithmetic.
std::vector<double> null_distribution(const Track& track, std::span<const WindowRange> windows,
                                      std::span<const std::uint32_t> bins,
                                      const DetectParams& params);

// For each observed score, the number of pool entries >= it (ties count).
// Permutations are partitioned across workers; counts are integers summed by
// permutation index, so the result is identical for any worker count.
std::vector<std::uint64_t> null_exceed_counts(const Track& track,
                                              std::span<const WindowRange> windows,
                                              std::span<const std::uint32_t> bins,
                                              std::span<const double> observed,
                                              const DetectParams& params, int n_threads = 1);

// p_i = (1 + #{pool >= s_i}) / (1 + |pool|). Pool must be sorted ascending
// and non-empty.
std::vector<double> empirical_pvalues(std::span<const double> observed,
                                      std::span<const double> sorted_null_pool);

// Benjamini-Hochberg step-up q-values. Throws on p outside (0, 1].
std::vector<double> adjust_multiplicity_bh(std::span<const double> p);

// Permutation FDR: q(s_i) = (#{null >= s_i} / N) / max(1, #{observed >= s_i}),
// clipped to <= 1 and monotonized so q is non-increasing in score.
std::vector<double> adjust_multiplicity_empirical(std::span<const double> observed,
                                                  std::span<const std::uint64_t> null_ge,
                                                  std::uint32_t n_permutations);

// Windows with q < alpha merged into maximal regions (overlap or abut, plus
// merge_gap slack). Region score/p/q aggregate member windows.
std::vector<Region> call_regions(std::span<const WindowStat> windows, double alpha,
                                 std::int64_t merge_gap = 0);

// The full engine: bins -> windows -> observed scores -> pooled permutation
// null -> empirical p -> multiplicity adjustment -> regions. Deterministic
// given params.seed for any n_threads.
DetectionResult detect(const Track& track, const DetectParams& params, int n_threads = 1);

}  // namespace tileperm

#endif  // TILEPERM_DETECT_HPP
