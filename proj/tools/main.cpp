// tileperm command line front end. Subcommands cover dataset synthesis,
// normalization, single-track detection, and the pseudo-array simulation
// reports. Every run writes a run-manifest.tsv echoing the resolved
// parameters before any compute output.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tileperm/dataset.hpp"
#include "tileperm/detect.hpp"
#include "tileperm/errors.hpp"
#include "tileperm/io.hpp"
#include "tileperm/metrics.hpp"
#include "tileperm/normalize.hpp"
#include "tileperm/parallel.hpp"
#include "tileperm/resample.hpp"
#include "tileperm/svg.hpp"
#include "tileperm/synth.hpp"

namespace fs = std::filesystem;
using namespace tileperm;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

struct Manifest {
    std::vector<std::pair<std::string, std::string>> rows;

    void add(const std::string& key, const std::string& value) { rows.emplace_back(key, value); }
    void add(const std::string& key, const char* value) { rows.emplace_back(key, value); }
    void add(const std::string& key, double value) { rows.emplace_back(key, fmt_double(value)); }
    template <typename T>
        requires std::is_integral_v<T>
    void add(const std::string& key, T value) {
        rows.emplace_back(key, std::to_string(value));
    }

    std::string tsv() const {
        std::string out = "parameter\tvalue\n";
        for (const auto& [k, v] : rows) out += k + "\t" + v + "\n";
        return out;
    }
};

void prepare_out(const fs::path& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory " + out.string());
}

// Flags shared by every subcommand that runs the detection engine.
struct DetectFlags {
    DetectParams params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--window-size", params.window_size, "Sliding window length in bases")
            ->envname("TILEPERM_WINDOW_SIZE")
            ->capture_default_str();
        cmd->add_option("--permutations", params.permutations, "Permutations for the null pool")
            ->envname("TILEPERM_PERMUTATIONS")
            ->capture_default_str();
        cmd->add_option("--gc-bins", params.gc_bins, "Equal-frequency GC strata")
            ->envname("TILEPERM_GC_BINS")
            ->capture_default_str();
        static const std::map<std::string, TrimMode> trim_map{
            {"trim-extremes", TrimMode::trim_extremes}, {"median", TrimMode::median}};
        cmd->add_option("--trim-mode", params.trim_mode, "Window score: trim-extremes or median")
            ->envname("TILEPERM_TRIM_MODE")
            ->transform(CLI::CheckedTransformer(trim_map, CLI::ignore_case))
            ->default_str("trim-extremes");
        cmd->add_option("--min-probes", params.min_probes, "Minimum probes per candidate window")
            ->envname("TILEPERM_MIN_PROBES")
            ->capture_default_str();
        cmd->add_option("--alpha", params.alpha, "Significance level on q-values")
            ->envname("TILEPERM_ALPHA")
            ->capture_default_str();
        static const std::map<std::string, MtcMethod> mtc_map{
            {"empirical-fdr", MtcMethod::empirical_fdr}, {"bh", MtcMethod::bh}};
        cmd->add_option("--mtc", params.mtc_method, "Multiplicity adjustment: empirical-fdr or bh")
            ->envname("TILEPERM_MTC")
            ->transform(CLI::CheckedTransformer(mtc_map, CLI::ignore_case))
            ->default_str("empirical-fdr");
        cmd->add_option("--merge-gap", params.merge_gap,
                        "Maximum gap between significant windows merged into one region")
            ->envname("TILEPERM_MERGE_GAP")
            ->capture_default_str();
    }

    void manifest(Manifest& m) const {
        m.add("window_size", params.window_size);
        m.add("permutations", params.permutations);
        m.add("gc_bins", params.gc_bins);
        m.add("trim_mode", params.trim_mode == TrimMode::median ? "median" : "trim-extremes");
        m.add("min_probes", params.min_probes);
        m.add("alpha", params.alpha);
        m.add("mtc", params.mtc_method == MtcMethod::bh ? "bh" : "empirical-fdr");
        m.add("merge_gap", params.merge_gap);
    }
};

// Flags shared by the simulation-driven subcommands.
struct PlanFlags {
    SimulationPlan plan;

    void attach(CLI::App* cmd, bool with_k_and_mode) {
        cmd->add_option("--sims", plan.n_sims, "Number of pseudo-array triplets")
            ->envname("TILEPERM_SIMS")
            ->capture_default_str();
        if (with_k_and_mode) {
            cmd->add_option("--k", plan.k, "Replicate spots chosen per probe")
                ->envname("TILEPERM_K")
                ->capture_default_str();
            static const std::map<std::string, PseudoMode> mode_map{
                {"spots", PseudoMode::spots},
                {"mean", PseudoMode::mean},
                {"median", PseudoMode::median}};
            cmd->add_option("--mode", plan.mode, "Pseudo-array assembly: spots, mean or median")
                ->envname("TILEPERM_MODE")
                ->transform(CLI::CheckedTransformer(mode_map, CLI::ignore_case))
                ->default_str("spots");
        }
        static const std::map<std::string, NormalizeScope> scope_map{
            {"triplet", NormalizeScope::triplet}, {"physical", NormalizeScope::physical}};
        cmd->add_option("--normalize-scope", plan.scope,
                        "Quantile normalization scope: triplet or physical")
            ->envname("TILEPERM_NORMALIZE_SCOPE")
            ->transform(CLI::CheckedTransformer(scope_map, CLI::ignore_case))
            ->default_str("triplet");
        cmd->add_option("--pseudocount", plan.pseudocount, "Pseudocount for the log2 transform")
            ->envname("TILEPERM_PSEUDOCOUNT")
            ->capture_default_str();
        cmd->add_option("--area-size", plan.area_size, "Area length in bases")
            ->envname("TILEPERM_AREA_SIZE")
            ->capture_default_str();
        cmd->add_flag("--independent-perm-seeds", plan.independent_perm_seeds,
                      "Give each array of a triplet its own permutation seed")
            ->envname("TILEPERM_INDEPENDENT_PERM_SEEDS");
        cmd->add_option("--seed", plan.master_seed, "Master seed for the whole batch")
            ->envname("TILEPERM_SEED")
            ->capture_default_str();
    }

    void manifest(Manifest& m, bool with_k_and_mode) const {
        m.add("sims", plan.n_sims);
        if (with_k_and_mode) {
            m.add("k", plan.k);
            m.add("mode", plan.mode == PseudoMode::spots
                              ? "spots"
                              : plan.mode == PseudoMode::mean ? "mean" : "median");
        }
        m.add("normalize_scope",
              plan.scope == NormalizeScope::triplet ? "triplet" : "physical");
        m.add("pseudocount", plan.pseudocount);
        m.add("area_size", plan.area_size);
        m.add("independent_perm_seeds", plan.independent_perm_seeds ? 1 : 0);
        m.add("seed", plan.master_seed);
    }
};

ProbeLayout load_layout(const std::string& path) { return parse_layout(read_file(path)); }

SpotIntensities load_intensities(const std::string& path, const ProbeLayout& layout) {
    const fs::path p(path);
    return parse_intensities(read_file(p), layout, p.stem().string());
}

DatasetBundle load_bundle(const std::string& layout_path,
                          const std::vector<std::string>& intensity_paths) {
    if (intensity_paths.size() != 3)
        throw ValidationError("exactly 3 intensity files required, got " +
                              std::to_string(intensity_paths.size()));
    ProbeLayout layout = load_layout(layout_path);
    std::vector<SpotIntensities> arrays;
    arrays.reserve(3);
    for (const std::string& p : intensity_paths) arrays.push_back(load_intensities(p, layout));
    return validate_bundle(std::move(layout), std::move(arrays));
}

// Every spot of the array as its own track entry, log2 transformed.
Track full_track(const ProbeLayout& layout, const SpotIntensities& spots, double pseudocount) {
    Track track;
    track.chrom = layout.chrom;
    track.positions.reserve(layout.n_spots());
    track.gc.reserve(layout.n_spots());
    for (const Spot& s : layout.spots) {
        track.positions.push_back(layout.probes[s.probe].start);
        track.gc.push_back(layout.probes[s.probe].gc);
    }
    track.values = spots.values;
    log2_transform_inplace(track.values, pseudocount);
    return track;
}

std::vector<PlantedSegment> parse_segments(const std::vector<std::string>& specs) {
    std::vector<PlantedSegment> segments;
    for (const std::string& spec : specs) {
        PlantedSegment seg;
        const auto c1 = spec.find(':');
        const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw ValidationError("segment spec must be start:end:effect, got '" + spec + "'");
        const char* b = spec.data();
        auto r1 = std::from_chars(b, b + c1, seg.start);
        auto r2 = std::from_chars(b + c1 + 1, b + c2, seg.end);
        auto r3 = std::from_chars(b + c2 + 1, b + spec.size(), seg.effect);
        if (r1.ec != std::errc() || r1.ptr != b + c1 || r2.ec != std::errc() ||
            r2.ptr != b + c2 || r3.ec != std::errc() || r3.ptr != b + spec.size())
            throw ValidationError("cannot parse segment spec '" + spec + "'");
        segments.push_back(seg);
    }
    return segments;
}

struct SynthCmd {
    SynthConfig cfg;
    std::vector<std::string> segment_specs;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--chrom", cfg.chrom, "Chromosome name")
            ->envname("TILEPERM_CHROM")
            ->capture_default_str();
        cmd->add_option("--region-start", cfg.region_start, "Tiled region start (1-based)")
            ->envname("TILEPERM_REGION_START")
            ->capture_default_str();
        cmd->add_option("--region-end", cfg.region_end, "Tiled region end (half-open)")
            ->envname("TILEPERM_REGION_END")
            ->capture_default_str();
        cmd->add_option("--tile-step", cfg.tile_step, "Probe tiling interval")
            ->envname("TILEPERM_TILE_STEP")
            ->capture_default_str();
        cmd->add_option("--probe-length", cfg.probe_length, "Probe length in bases")
            ->envname("TILEPERM_PROBE_LENGTH")
            ->capture_default_str();
        cmd->add_option("--replicates", cfg.n_replicates, "Replicate spots per probe")
            ->envname("TILEPERM_REPLICATES")
            ->capture_default_str();
        cmd->add_option("--containers", cfg.n_containers, "Logical containers per array")
            ->envname("TILEPERM_CONTAINERS")
            ->capture_default_str();
        cmd->add_option("--segment", segment_specs,
                        "Planted segment start:end:effect (repeatable)")
            ->envname("TILEPERM_SEGMENT");
        cmd->add_option("--baseline", cfg.baseline, "Baseline log2 intensity")
            ->envname("TILEPERM_BASELINE")
            ->capture_default_str();
        cmd->add_option("--gc-slope", cfg.gc_slope, "Linear GC effect on log2 intensity")
            ->envname("TILEPERM_GC_SLOPE")
            ->capture_default_str();
        cmd->add_option("--noise-sd", cfg.noise_sd, "Per-spot noise sd")
            ->envname("TILEPERM_NOISE_SD")
            ->capture_default_str();
        cmd->add_option("--container-sd", cfg.container_sd, "Per (array, container) offset sd")
            ->envname("TILEPERM_CONTAINER_SD")
            ->capture_default_str();
        cmd->add_option("--array-sd", cfg.array_sd, "Per-array offset sd")
            ->envname("TILEPERM_ARRAY_SD")
            ->capture_default_str();
        cmd->add_option("--probe-sd", cfg.probe_sd, "Per-probe offset sd (shared across arrays)")
            ->envname("TILEPERM_PROBE_SD")
            ->capture_default_str();
        cmd->add_option("--dropout", cfg.dropout_fraction, "Fraction of probes dropped")
            ->envname("TILEPERM_DROPOUT")
            ->capture_default_str();
        cmd->add_option("--seed", cfg.seed, "Generator seed")
            ->envname("TILEPERM_SEED")
            ->capture_default_str();
        cmd->add_option("--area-size", cfg.area_size, "Area length for the truth grid")
            ->envname("TILEPERM_AREA_SIZE")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        cfg.segments = parse_segments(segment_specs);
        cfg.validate();
        prepare_out(out);

        Manifest m;
        m.add("subcommand", "synth");
        m.add("chrom", cfg.chrom);
        m.add("region_start", cfg.region_start);
        m.add("region_end", cfg.region_end);
        m.add("tile_step", cfg.tile_step);
        m.add("probe_length", cfg.probe_length);
        m.add("replicates", cfg.n_replicates);
        m.add("containers", cfg.n_containers);
        for (const std::string& s : segment_specs) m.add("segment", s);
        m.add("baseline", cfg.baseline);
        m.add("gc_slope", cfg.gc_slope);
        m.add("noise_sd", cfg.noise_sd);
        m.add("container_sd", cfg.container_sd);
        m.add("array_sd", cfg.array_sd);
        m.add("probe_sd", cfg.probe_sd);
        m.add("dropout", cfg.dropout_fraction);
        m.add("seed", cfg.seed);
        m.add("area_size", cfg.area_size);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        auto [bundle, truth] = generate_synthetic(cfg);
        write_file(fs::path(out) / "layout.tsv", write_layout(bundle.layout));
        for (const SpotIntensities& a : bundle.arrays)
            write_file(fs::path(out) / (a.array_id + ".tsv"), write_intensities(a, bundle.layout));
        write_file(fs::path(out) / "truth.bed", truth_bed(truth, cfg.chrom));
        return 0;
    }
};

struct NormalizeCmd {
    std::string layout_path;
    std::vector<std::string> intensity_paths;
    double pseudocount = 1.0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--layout", layout_path, "Layout TSV")
            ->envname("TILEPERM_LAYOUT")
            ->required();
        cmd->add_option("--intensities", intensity_paths, "Intensity TSVs (two or more)")
            ->envname("TILEPERM_INTENSITIES")
            ->required();
        cmd->add_option("--pseudocount", pseudocount, "Pseudocount for the log2 transform")
            ->envname("TILEPERM_PSEUDOCOUNT")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        if (intensity_paths.size() < 2)
            throw ValidationError("quantile normalization needs at least 2 intensity files");
        prepare_out(out);

        Manifest m;
        m.add("subcommand", "normalize");
        m.add("layout", layout_path);
        for (const std::string& p : intensity_paths) m.add("intensities", p);
        m.add("pseudocount", pseudocount);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        const ProbeLayout layout = load_layout(layout_path);
        std::vector<SpotIntensities> arrays;
        std::vector<std::vector<double>> columns;
        for (const std::string& p : intensity_paths) {
            arrays.push_back(load_intensities(p, layout));
            columns.push_back(arrays.back().values);
            log2_transform_inplace(columns.back(), pseudocount);
        }
        quantile_normalize_inplace(columns);
        for (std::size_t i = 0; i < arrays.size(); ++i) {
            arrays[i].values = std::move(columns[i]);
            write_file(fs::path(out) / ("normalized_" + arrays[i].array_id + ".tsv"),
                       write_intensities(arrays[i], layout));
        }
        return 0;
    }
};

struct DetectCmd {
    std::string layout_path;
    std::string intensity_path;
    DetectFlags detect_flags;
    double pseudocount = 1.0;
    bool emit_windows = false;
    int threads = 0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--layout", layout_path, "Layout TSV")
            ->envname("TILEPERM_LAYOUT")
            ->required();
        cmd->add_option("--intensities", intensity_path, "Intensity TSV (one track)")
            ->envname("TILEPERM_INTENSITIES")
            ->required();
        detect_flags.attach(cmd);
        cmd->add_option("--seed", detect_flags.params.seed, "Permutation seed")
            ->envname("TILEPERM_SEED")
            ->capture_default_str();
        cmd->add_option("--pseudocount", pseudocount, "Pseudocount for the log2 transform")
            ->envname("TILEPERM_PSEUDOCOUNT")
            ->capture_default_str();
        cmd->add_flag("--emit-windows", emit_windows, "Also write the full window table")
            ->envname("TILEPERM_EMIT_WINDOWS");
        cmd->add_option("--threads", threads, "Worker threads (0 = auto)")
            ->envname("TILEPERM_THREADS")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        const int n_threads = resolve_threads(threads);
        prepare_out(out);

        Manifest m;
        m.add("subcommand", "detect");
        m.add("layout", layout_path);
        m.add("intensities", intensity_path);
        detect_flags.manifest(m);
        m.add("seed", detect_flags.params.seed);
        m.add("pseudocount", pseudocount);
        m.add("emit_windows", emit_windows ? 1 : 0);
        m.add("threads", n_threads);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        const ProbeLayout layout = load_layout(layout_path);
        const SpotIntensities spots = load_intensities(intensity_path, layout);
        const Track track = full_track(layout, spots, pseudocount);
        const DetectionResult result = detect(track, detect_flags.params, n_threads);
        write_file(fs::path(out) / "regions.tsv", regions_tsv(result, layout.chrom));
        if (emit_windows)
            write_file(fs::path(out) / "windows.tsv", windows_tsv(result, layout.chrom));
        return 0;
    }
};

struct SimulateCmd {
    std::string layout_path;
    std::vector<std::string> intensity_paths;
    PlanFlags plan_flags;
    DetectFlags detect_flags;
    int threads = 0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--layout", layout_path, "Layout TSV")
            ->envname("TILEPERM_LAYOUT")
            ->required();
        cmd->add_option("--intensities", intensity_paths, "Three intensity TSVs")
            ->envname("TILEPERM_INTENSITIES")
            ->required();
        plan_flags.attach(cmd, true);
        detect_flags.attach(cmd);
        cmd->add_option("--threads", threads, "Worker threads (0 = auto)")
            ->envname("TILEPERM_THREADS")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        const int n_threads = resolve_threads(threads);
        prepare_out(out);

        Manifest m;
        m.add("subcommand", "simulate");
        m.add("layout", layout_path);
        for (const std::string& p : intensity_paths) m.add("intensities", p);
        plan_flags.manifest(m, true);
        detect_flags.manifest(m);
        m.add("threads", n_threads);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        const DatasetBundle bundle = load_bundle(layout_path, intensity_paths);
        SimulationPlan plan = plan_flags.plan;
        plan.detect = detect_flags.params;
        const SimulationBatchResult batch = run_simulation_batch(bundle, plan, n_threads);
        write_batch(out, batch);
        return 0;
    }
};

struct Table1Cmd {
    std::string layout_path;
    std::vector<std::string> intensity_paths;
    PlanFlags plan_flags;
    DetectFlags detect_flags;
    StrategyParams strategy_params;
    int threads = 0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--layout", layout_path, "Layout TSV")
            ->envname("TILEPERM_LAYOUT")
            ->required();
        cmd->add_option("--intensities", intensity_paths, "Three intensity TSVs")
            ->envname("TILEPERM_INTENSITIES")
            ->required();
        plan_flags.attach(cmd, false);
        detect_flags.attach(cmd);
        cmd->add_option("--top-n", strategy_params.top_n, "Regions kept by the top30 strategy")
            ->envname("TILEPERM_TOP_N")
            ->capture_default_str();
        cmd->add_option("--stability-threshold", strategy_params.stability_threshold,
                        "Within-array frequency for the stable99 strategy")
            ->envname("TILEPERM_STABILITY_THRESHOLD")
            ->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads (0 = auto)")
            ->envname("TILEPERM_THREADS")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        const int n_threads = resolve_threads(threads);
        prepare_out(out);

        Manifest m;
        m.add("subcommand", "table1");
        m.add("layout", layout_path);
        for (const std::string& p : intensity_paths) m.add("intensities", p);
        plan_flags.manifest(m, false);
        detect_flags.manifest(m);
        m.add("top_n", strategy_params.top_n);
        m.add("stability_threshold", strategy_params.stability_threshold);
        m.add("threads", n_threads);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        const DatasetBundle bundle = load_bundle(layout_path, intensity_paths);
        SimulationPlan plan = plan_flags.plan;
        plan.detect = detect_flags.params;
        const std::vector<ConsistencyRow> rows =
            consistency_table(bundle, plan, strategy_params, n_threads);
        write_file(fs::path(out) / "table1.tsv", table1_tsv(rows));
        return 0;
    }
};

struct Fig1Cmd {
    std::string layout_path;
    std::vector<std::string> intensity_paths;
    PlanFlags plan_flags;
    DetectFlags detect_flags;
    int array_index = 0;
    int smooth_window = 51;
    std::string format = "tsv";
    int threads = 0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--layout", layout_path, "Layout TSV")
            ->envname("TILEPERM_LAYOUT")
            ->required();
        cmd->add_option("--intensities", intensity_paths, "Three intensity TSVs")
            ->envname("TILEPERM_INTENSITIES")
            ->required();
        plan_flags.attach(cmd, false);
        detect_flags.attach(cmd);
        cmd->add_option("--array-index", array_index, "Which array's frequency track (0..2)")
            ->envname("TILEPERM_ARRAY_INDEX")
            ->capture_default_str();
        cmd->add_option("--smooth-window", smooth_window, "Moving-average window (odd)")
            ->envname("TILEPERM_SMOOTH_WINDOW")
            ->capture_default_str();
        cmd->add_option("--format", format, "Output format: tsv or tsv+svg")
            ->envname("TILEPERM_FORMAT")
            ->check(CLI::IsMember({"tsv", "tsv+svg"}))
            ->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads (0 = auto)")
            ->envname("TILEPERM_THREADS")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        const int n_threads = resolve_threads(threads);
        prepare_out(out);

        Manifest m;
        m.add("subcommand", "fig1");
        m.add("layout", layout_path);
        for (const std::string& p : intensity_paths) m.add("intensities", p);
        plan_flags.manifest(m, false);
        detect_flags.manifest(m);
        m.add("array_index", array_index);
        m.add("smooth_window", smooth_window);
        m.add("format", format);
        m.add("threads", n_threads);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        const DatasetBundle bundle = load_bundle(layout_path, intensity_paths);
        SimulationPlan plan = plan_flags.plan;
        plan.detect = detect_flags.params;
        plan.k = 1;
        plan.mode = PseudoMode::spots;
        const SimulationBatchResult batch = run_simulation_batch(bundle, plan, n_threads);
        const FrequencyTrack track = selection_frequency(batch, array_index);
        const std::vector<double> smoothed = smooth_track(track.counts, smooth_window);
        write_file(fs::path(out) / "fig1.tsv", fig1_tsv(track, smoothed));

        if (format == "tsv+svg") {
            SvgSeries raw{"count", {}, {}, "#bbbbbb"};
            SvgSeries smooth{"smoothed", {}, {}, "#1f77b4"};
            for (std::size_t a = 0; a < track.counts.size(); ++a) {
                const double x = static_cast<double>(track.grid.area_start(a));
                raw.x.push_back(x);
                raw.y.push_back(track.counts[a]);
                smooth.x.push_back(x);
                smooth.y.push_back(smoothed[a]);
            }
            write_file(fs::path(out) / "fig1.svg",
                       line_plot_svg("Area selection frequency", "position", "simulations",
                                     {raw, smooth}));
        }
        return 0;
    }
};

struct SweepCmd {
    std::string layout_path;
    std::vector<std::string> intensity_paths;
    PlanFlags plan_flags;
    DetectFlags detect_flags;
    std::vector<std::uint32_t> ks;
    std::string format = "tsv";
    int threads = 0;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--layout", layout_path, "Layout TSV")
            ->envname("TILEPERM_LAYOUT")
            ->required();
        cmd->add_option("--intensities", intensity_paths, "Three intensity TSVs")
            ->envname("TILEPERM_INTENSITIES")
            ->required();
        plan_flags.attach(cmd, false);
        detect_flags.attach(cmd);
        cmd->add_option("--ks", ks, "Replicate counts to sweep (default 1..R)")
            ->envname("TILEPERM_KS");
        cmd->add_option("--format", format, "Output format: tsv or tsv+svg")
            ->envname("TILEPERM_FORMAT")
            ->check(CLI::IsMember({"tsv", "tsv+svg"}))
            ->capture_default_str();
        cmd->add_option("--threads", threads, "Worker threads (0 = auto)")
            ->envname("TILEPERM_THREADS")
            ->capture_default_str();
        cmd->add_option("--out", out, "Output directory")
            ->envname("TILEPERM_OUT")
            ->required();
    }

    int run() {
        const int n_threads = resolve_threads(threads);
        prepare_out(out);

        const DatasetBundle bundle = load_bundle(layout_path, intensity_paths);
        if (ks.empty())
            for (std::uint32_t k = 1; k <= bundle.layout.n_replicates; ++k) ks.push_back(k);

        Manifest m;
        m.add("subcommand", "sweep");
        m.add("layout", layout_path);
        for (const std::string& p : intensity_paths) m.add("intensities", p);
        plan_flags.manifest(m, false);
        detect_flags.manifest(m);
        for (std::uint32_t k : ks) m.add("ks", k);
        m.add("format", format);
        m.add("threads", n_threads);
        m.add("out", out);
        write_file(fs::path(out) / "run-manifest.tsv", m.tsv());

        SimulationPlan plan = plan_flags.plan;
        plan.detect = detect_flags.params;
        const SweepResult sweep = replicate_sweep(bundle, plan, ks, n_threads);
        write_file(fs::path(out) / "sweep.tsv", sweep_tsv(sweep));

        if (format == "tsv+svg") {
            SvgSeries ge1{"\xe2\x89\xa5 1 array", {}, {}, "#1f77b4"};
            SvgSeries ge2{"\xe2\x89\xa5 2 arrays", {}, {}, "#ff7f0e"};
            SvgSeries eq3{"all 3 arrays", {}, {}, "#2ca02c"};
            for (std::size_t i = 0; i < sweep.ks.size(); ++i) {
                const double x = sweep.ks[i];
                ge1.x.push_back(x);
                ge1.y.push_back(sweep.proportions[i][0]);
                ge2.x.push_back(x);
                ge2.y.push_back(sweep.proportions[i][1]);
                eq3.x.push_back(x);
                eq3.y.push_back(sweep.proportions[i][2]);
            }
            write_file(fs::path(out) / "sweep.svg",
                       line_plot_svg("Selected proportion vs replicates", "replicates k",
                                     "proportion of areas", {ge1, ge2, eq3}));
        }
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation detector of expressed regions on tiled microarrays"};
    app.require_subcommand(1);

    SynthCmd synth_cmd;
    synth_cmd.attach(app.add_subcommand("synth", "Generate a synthetic replicated dataset"));
    NormalizeCmd normalize_cmd;
    normalize_cmd.attach(
        app.add_subcommand("normalize", "Log2 + quantile normalize intensity tracks"));
    DetectCmd detect_cmd;
    detect_cmd.attach(app.add_subcommand("detect", "Detect expressed regions on one track"));
    SimulateCmd simulate_cmd;
    simulate_cmd.attach(
        app.add_subcommand("simulate", "Run a pseudo-array simulation batch"));
    Table1Cmd table1_cmd;
    table1_cmd.attach(
        app.add_subcommand("table1", "Consistency proportions for all six strategies"));
    Fig1Cmd fig1_cmd;
    fig1_cmd.attach(app.add_subcommand("fig1", "Area selection frequency track"));
    SweepCmd sweep_cmd;
    sweep_cmd.attach(app.add_subcommand("sweep", "Consistency against replicate count"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (app.got_subcommand("synth")) return synth_cmd.run();
        if (app.got_subcommand("normalize")) return normalize_cmd.run();
        if (app.got_subcommand("detect")) return detect_cmd.run();
        if (app.got_subcommand("simulate")) return simulate_cmd.run();
        if (app.got_subcommand("table1")) return table1_cmd.run();
        if (app.got_subcommand("fig1")) return fig1_cmd.run();
        if (app.got_subcommand("sweep")) return sweep_cmd.run();
        std::fprintf(stderr, "error: no subcommand\n");
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
