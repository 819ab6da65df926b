#ifndef TILEPERM_METRICS_HPP
#define TILEPERM_METRICS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tileperm/resample.hpp"

namespace tileperm {

// The six area-selection strategies compared in the consistency table.
enum class Strategy { top30, one_rep, two_rep_half, median_ten, stable99, all_ten };

struct StrategyParams {
    std::uint32_t top_n = 30;
    double stability_threshold = 0.99;
};

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

// Per-area count of simulations (out of n_sims) in which the area was called
// on one array.
struct FrequencyTrack {
    AreaGrid grid;
    std::vector<std::uint32_t> counts;
    std::size_t n_sims = 0;
};

FrequencyTrack selection_frequency(const SimulationBatchResult& batch, int array_index);

// Centered moving average with truncated edge windows. window must be odd;
// window 1 is the identity.
std::vector<double> smooth_track(std::span<const std::uint32_t> counts, int window = 51);

// Averaged exactly-one/two/three proportions for one strategy. Within each
// simulation the proportions are over areas called on at least one of the
// three arrays; simulations with an empty union are excluded from the mean
// and counted in n_sims_total - n_sims_used.
struct ConsistencyRow {
    Strategy strategy = Strategy::one_rep;
    double exactly_one = 0.0;
    double exactly_two = 0.0;
    double exactly_three = 0.0;
    std::size_t n_sims_used = 0;
    std::size_t n_sims_total = 0;
    // Raw per-simulation triples for the sims that had a non-empty union.
    std::vector<std::array<double, 3>> per_sim;
};

ConsistencyRow consistency_row(const SimulationBatchResult& batch, Strategy strategy);

// top30 reduction: keep the top_n called regions per (sim, array) by max
// window score (ties broken by start) and re-derive area calls.
SimulationBatchResult derive_top_regions(const SimulationBatchResult& batch, std::uint32_t top_n);

// stable99 reduction: per array, an area is selected iff its within-array
// selection frequency over the batch reaches the threshold. Produces a batch
// with a single conceptual simulation.
SimulationBatchResult derive_stability(const SimulationBatchResult& batch, double threshold);

// Mask keeping probes of even rank in position order (emulates doubling the
// tile step).
std::vector<std::uint8_t> even_rank_mask(const ProbeLayout& layout);

// Runs the batch for one strategy. top30 and stable99 are reductions of the
// one-rep batch; pass it via one_rep_batch to avoid recomputation (required
// for the subset relation between top30 and one-rep to be exact).
SimulationBatchResult apply_strategy(const DatasetBundle& bundle, const SimulationPlan& base,
                                     Strategy strategy, const StrategyParams& sp, int n_threads,
                                     const SimulationBatchResult* one_rep_batch = nullptr);

// All six strategies, fixed report row order.
std::vector<ConsistencyRow> consistency_table(const DatasetBundle& bundle,
                                              const SimulationPlan& base,
                                              const StrategyParams& sp, int n_threads = 1);

// Mean proportion of all grid areas selected on >=1, >=2 and all 3 arrays,
// per replicate count k.
struct SweepResult {
    std::vector<std::uint32_t> ks;
    std::vector<std::array<double, 3>> proportions;  // [p_ge1, p_ge2, p_eq3]
};

SweepResult replicate_sweep(const DatasetBundle& bundle, const SimulationPlan& base,
                            std::span<const std::uint32_t> ks, int n_threads = 1);

}  // namespace tileperm

#endif  // TILEPERM_METRICS_HPP
