#include "tileperm/io.hpp"

#include <cstdio>
#include <fstream>

#include "tileperm/errors.hpp"

namespace tileperm {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string score_fmt(double v) { return fmt("%.6f", v); }
std::string pq_fmt(double v) { return fmt("%.6g", v); }

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed to read " + path.string());
    return content;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed to write " + path.string());
}

std::string regions_tsv(const DetectionResult& result, const std::string& chrom) {
    std::string out = "chrom\tstart\tend\tscore\tp\tq\n";
    for (const Region& r : result.regions) {
        out += chrom + "\t" + std::to_string(r.start) + "\t" + std::to_string(r.end) + "\t" +
               score_fmt(r.max_score) + "\t" + pq_fmt(r.min_p) + "\t" + pq_fmt(r.min_q) + "\n";
    }
    return out;
}

std::string windows_tsv(const DetectionResult& result, const std::string& chrom) {
    std::string out = "chrom\tstart\tend\tscore\tp\tq\n";
    for (const WindowStat& w : result.windows) {
        out += chrom + "\t" + std::to_string(w.start) + "\t" + std::to_string(w.end) + "\t" +
               score_fmt(w.score) + "\t" + pq_fmt(w.p) + "\t" + pq_fmt(w.q) + "\n";
    }
    return out;
}

std::string areas_tsv(const AreaCalls& calls) {
    std::string out = "area_index\tstart\tend\texpressed\n";
    for (std::size_t a = 0; a < calls.bits.size(); ++a) {
        out += std::to_string(a) + "\t" + std::to_string(calls.grid.area_start(a)) + "\t" +
               std::to_string(calls.grid.area_end(a)) + "\t" + (calls.bits[a] ? "1" : "0") + "\n";
    }
    return out;
}

std::string table1_tsv(std::span<const ConsistencyRow> rows) {
    std::string out = "strategy\texactly_one\texactly_two\texactly_three\tn_sims_used\n";
    for (const ConsistencyRow& r : rows) {
        out += std::string(strategy_name(r.strategy)) + "\t" + fmt("%.4f", r.exactly_one) + "\t" +
               fmt("%.4f", r.exactly_two) + "\t" + fmt("%.4f", r.exactly_three) + "\t" +
               std::to_string(r.n_sims_used) + "\n";
    }
    return out;
}

std::string fig1_tsv(const FrequencyTrack& track, std::span<const double> smoothed) {
    if (smoothed.size() != track.counts.size())
        throw ValidationError("smoothed track length mismatch");
    std::string out = "area_index\tstart\tcount\tsmoothed\n";
    for (std::size_t a = 0; a < track.counts.size(); ++a) {
        out += std::to_string(a) + "\t" + std::to_string(track.grid.area_start(a)) + "\t" +
               std::to_string(track.counts[a]) + "\t" + fmt("%.4f", smoothed[a]) + "\n";
    }
    return out;
}

std::string sweep_tsv(const SweepResult& sweep) {
    std::string out = "k\tp_ge1\tp_ge2\tp_eq3\n";
    for (std::size_t i = 0; i < sweep.ks.size(); ++i) {
        out += std::to_string(sweep.ks[i]) + "\t" + fmt("%.6f", sweep.proportions[i][0]) + "\t" +
               fmt("%.6f", sweep.proportions[i][1]) + "\t" + fmt("%.6f", sweep.proportions[i][2]) +
               "\n";
    }
    return out;
}

std::string truth_bed(const GroundTruth& truth, const std::string& chrom) {
    std::string out = "#chrom\tstart\tend\teffect\n";
    for (const PlantedSegment& s : truth.segments) {
        out += chrom + "\t" + std::to_string(s.start) + "\t" + std::to_string(s.end) + "\t" +
               pq_fmt(s.effect) + "\n";
    }
    return out;
}

std::string batch_manifest_tsv(const SimulationBatchResult& batch) {
    std::string out =
        "sim_index\tassignment_seed\tperm_seed_1\tperm_seed_2\tperm_seed_3"
        "\tregions_1\tregions_2\tregions_3\tcalled_bases_1\tcalled_bases_2\tcalled_bases_3\n";
    for (std::size_t i = 0; i < batch.n_sims(); ++i) {
        out += std::to_string(i);
        for (std::uint64_t s : batch.seeds[i]) out += "\t" + std::to_string(s);
        for (int j = 0; j < 3; ++j)
            out += "\t" + std::to_string(batch.sims[i][j].region_count());
        for (int j = 0; j < 3; ++j)
            out += "\t" + std::to_string(batch.sims[i][j].called_bases());
        out += "\n";
    }
    return out;
}

void write_batch(const std::filesystem::path& dir, const SimulationBatchResult& batch) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string());
    write_file(dir / "manifest.tsv", batch_manifest_tsv(batch));
    for (std::size_t i = 0; i < batch.n_sims(); ++i) {
        for (int j = 0; j < 3; ++j) {
            AreaCalls calls;
            calls.grid = batch.grid;
            calls.bits = batch.sims[i][j].area_bits;
            const std::string name =
                "sim_" + std::to_string(i) + "_array_" + std::to_string(j) + "_areas.tsv";
            write_file(dir / name, areas_tsv(calls));
        }
    }
}

}  // namespace tileperm
