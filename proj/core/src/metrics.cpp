#include "tileperm/metrics.hpp"

#include <algorithm>
#include <cstddef>

#include "tileperm/errors.hpp"

namespace tileperm {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::top30: return "top30";
        case Strategy::one_rep: return "one-rep";
        case Strategy::two_rep_half: return "two-rep-half";
        case Strategy::median_ten: return "median-ten";
        case Strategy::stable99: return "stable99";
        case Strategy::all_ten: return "all-ten";
    }
    throw ValidationError("unknown strategy");
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "top30") return Strategy::top30;
    if (name == "one-rep") return Strategy::one_rep;
    if (name == "two-rep-half") return Strategy::two_rep_half;
    if (name == "median-ten") return Strategy::median_ten;
    if (name == "stable99") return Strategy::stable99;
    if (name == "all-ten") return Strategy::all_ten;
    throw ValidationError("unknown strategy '" + name + "'");
}

FrequencyTrack selection_frequency(const SimulationBatchResult& batch, int array_index) {
    if (array_index < 0 || array_index > 2) throw ValidationError("array index out of 0..2");
    if (batch.sims.empty()) throw ValidationError("empty batch");
    FrequencyTrack track;
    track.grid = batch.grid;
    track.n_sims = batch.n_sims();
    track.counts.assign(batch.grid.n_areas, 0);
    for (const auto& sim : batch.sims) {
        const auto& bits = sim[static_cast<std::size_t>(array_index)].area_bits;
        for (std::size_t a = 0; a < bits.size(); ++a) track.counts[a] += bits[a];
    }
    return track;
}

std::vector<double> smooth_track(std::span<const std::uint32_t> counts, int window) {
    if (window < 1 || window % 2 == 0) throw ValidationError("smoothing window must be odd");
    const std::size_t n = counts.size();
    const std::size_t h = static_cast<std::size_t>(window / 2);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > h ? i - h : 0;
        const std::size_t hi = std::min(n, i + h + 1);
        double sum = 0.0;
        for (std::size_t j = lo; j < hi; ++j) sum += counts[j];
        out[i] = sum / static_cast<double>(hi - lo);
    }
    return out;
}

ConsistencyRow consistency_row(const SimulationBatchResult& batch, Strategy strategy) {
    ConsistencyRow row;
    row.strategy = strategy;
    row.n_sims_total = batch.n_sims();
    const std::size_t n_areas = batch.grid.n_areas;
    double sum1 = 0.0, sum2 = 0.0, sum3 = 0.0;
    for (const auto& sim : batch.sims) {
        std::size_t n1 = 0, n2 = 0, n3 = 0;
        for (std::size_t a = 0; a < n_areas; ++a) {
            const int c = sim[0].area_bits[a] + sim[1].area_bits[a] + sim[2].area_bits[a];
            if (c == 1) ++n1;
            else if (c == 2) ++n2;
            else if (c == 3) ++n3;
        }
        const std::size_t u = n1 + n2 + n3;
        if (u == 0) continue;
        const double du = static_cast<double>(u);
        const std::array<double, 3> triple = {n1 / du, n2 / du, n3 / du};
        row.per_sim.push_back(triple);
        sum1 += triple[0];
        sum2 += triple[1];
        sum3 += triple[2];
        ++row.n_sims_used;
    }
    if (row.n_sims_used > 0) {
        const double s = static_cast<double>(row.n_sims_used);
        row.exactly_one = sum1 / s;
        row.exactly_two = sum2 / s;
        row.exactly_three = sum3 / s;
    }
    return row;
}

SimulationBatchResult derive_top_regions(const SimulationBatchResult& batch, std::uint32_t top_n) {
    if (top_n < 1) throw ValidationError("top_n must be at least 1");
    SimulationBatchResult out;
    out.grid = batch.grid;
    out.seeds = batch.seeds;
    out.sims.resize(batch.sims.size());
    for (std::size_t i = 0; i < batch.sims.size(); ++i) {
        for (int j = 0; j < 3; ++j) {
            const auto& regions = batch.sims[i][j].regions;
            std::vector<std::uint32_t> order(regions.size());
            for (std::uint32_t r = 0; r < regions.size(); ++r) order[r] = r;
            std::stable_sort(order.begin(), order.end(),
                             [&regions](std::uint32_t a, std::uint32_t b) {
                                 if (regions[a].max_score != regions[b].max_score)
                                     return regions[a].max_score > regions[b].max_score;
                                 return regions[a].start < regions[b].start;
                             });
            order.resize(std::min<std::size_t>(order.size(), top_n));
            std::sort(order.begin(), order.end());
            SimArrayResult& cell = out.sims[i][j];
            for (std::uint32_t r : order) cell.regions.push_back(regions[r]);
            cell.area_bits = call_areas(cell.regions, out.grid).bits;
        }
    }
    return out;
}

SimulationBatchResult derive_stability(const SimulationBatchResult& batch, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw ValidationError("stability threshold must be in (0, 1]");
    if (batch.sims.empty()) throw ValidationError("empty batch");
    SimulationBatchResult out;
    out.grid = batch.grid;
    out.sims.resize(1);
    out.seeds.assign(1, {0, 0, 0, 0});
    const double s = static_cast<double>(batch.n_sims());
    for (int j = 0; j < 3; ++j) {
        std::vector<std::uint32_t> counts(batch.grid.n_areas, 0);
        for (const auto& sim : batch.sims) {
            const auto& bits = sim[j].area_bits;
            for (std::size_t a = 0; a < bits.size(); ++a) counts[a] += bits[a];
        }
        auto& bits = out.sims[0][j].area_bits;
        bits.assign(batch.grid.n_areas, 0);
        for (std::size_t a = 0; a < bits.size(); ++a)
            bits[a] = static_cast<double>(counts[a]) / s >= threshold ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> even_rank_mask(const ProbeLayout& layout) {
    std::vector<std::uint8_t> mask(layout.n_probes());
    for (std::size_t p = 0; p < mask.size(); ++p) mask[p] = p % 2 == 0 ? 1 : 0;
    return mask;
}

SimulationBatchResult apply_strategy(const DatasetBundle& bundle, const SimulationPlan& base,
                                     Strategy strategy, const StrategyParams& sp, int n_threads,
                                     const SimulationBatchResult* one_rep_batch) {
    auto one_rep = [&]() -> SimulationBatchResult {
        if (one_rep_batch) return *one_rep_batch;
        SimulationPlan plan = base;
        plan.k = 1;
        plan.mode = PseudoMode::spots;
        plan.probe_mask.clear();
        return run_simulation_batch(bundle, plan, n_threads);
    };

    switch (strategy) {
        case Strategy::top30:
            return derive_top_regions(one_rep(), sp.top_n);
        case Strategy::one_rep:
            return one_rep();
        case Strategy::stable99:
            return derive_stability(one_rep(), sp.stability_threshold);
        case Strategy::two_rep_half: {
            SimulationPlan plan = base;
            plan.k = 2;
            plan.mode = PseudoMode::spots;
            plan.probe_mask = even_rank_mask(bundle.layout);
            return run_simulation_batch(bundle, plan, n_threads);
        }
        case Strategy::median_ten: {
            SimulationPlan plan = base;
            plan.k = bundle.layout.n_replicates;
            plan.mode = PseudoMode::median;
            plan.probe_mask.clear();
            return run_simulation_batch(bundle, plan, n_threads);
        }
        case Strategy::all_ten: {
            SimulationPlan plan = base;
            plan.k = bundle.layout.n_replicates;
            plan.mode = PseudoMode::spots;
            plan.probe_mask.clear();
            return run_simulation_batch(bundle, plan, n_threads);
        }
    }
    throw ValidationError("unknown strategy");
}

std::vector<ConsistencyRow> consistency_table(const DatasetBundle& bundle,
                                              const SimulationPlan& base,
                                              const StrategyParams& sp, int n_threads) {
    SimulationPlan plan = base;
    plan.k = 1;
    plan.mode = PseudoMode::spots;
    plan.probe_mask.clear();
    const SimulationBatchResult one_rep = run_simulation_batch(bundle, plan, n_threads);

    const Strategy order[] = {Strategy::top30,      Strategy::one_rep,  Strategy::two_rep_half,
                              Strategy::median_ten, Strategy::stable99, Strategy::all_ten};
    std::vector<ConsistencyRow> rows;
    rows.reserve(6);
    for (Strategy s : order) {
        const SimulationBatchResult batch =
            s == Strategy::one_rep ? one_rep
                                   : apply_strategy(bundle, base, s, sp, n_threads, &one_rep);
        rows.push_back(consistency_row(batch, s));
    }
    return rows;
}

SweepResult replicate_sweep(const DatasetBundle& bundle, const SimulationPlan& base,
                            std::span<const std::uint32_t> ks, int n_threads) {
    if (ks.empty()) throw ValidationError("empty k list");
    SweepResult sweep;
    for (std::uint32_t k : ks) {
        SimulationPlan plan = base;
        plan.k = k;
        plan.mode = PseudoMode::spots;
        plan.probe_mask.clear();
        const SimulationBatchResult batch = run_simulation_batch(bundle, plan, n_threads);
        // integer tallies first, one division at the end
        std::uint64_t ge1 = 0, ge2 = 0, eq3 = 0;
        for (const auto& sim : batch.sims) {
            for (std::size_t a = 0; a < batch.grid.n_areas; ++a) {
                const int c = sim[0].area_bits[a] + sim[1].area_bits[a] + sim[2].area_bits[a];
                if (c >= 1) ++ge1;
                if (c >= 2) ++ge2;
                if (c == 3) ++eq3;
            }
        }
        const double denom =
            static_cast<double>(batch.n_sims()) * static_cast<double>(batch.grid.n_areas);
        sweep.ks.push_back(k);
        sweep.proportions.push_back({ge1 / denom, ge2 / denom, eq3 / denom});
    }
    return sweep;
}

}  // namespace tileperm
