#ifndef TILEPERM_IO_HPP
#define TILEPERM_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tileperm/areas.hpp"
#include "tileperm/detect.hpp"
#include "tileperm/metrics.hpp"
#include "tileperm/resample.hpp"
#include "tileperm/synth.hpp"

namespace tileperm {

// Whole-file helpers; throw IoError with the path in the message.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Report writers. All output is UTF-8, tab-separated, LF line endings, with
// a single header line; formatting is fixed so identical runs are
// byte-identical.

// `chrom start end score p q`, one row per region.
std::string regions_tsv(const DetectionResult& result, const std::string& chrom);
// Same columns, one row per candidate window.
std::string windows_tsv(const DetectionResult& result, const std::string& chrom);
// `area_index start end expressed`.
std::string areas_tsv(const AreaCalls& calls);
// `strategy exactly_one exactly_two exactly_three n_sims_used`.
std::string table1_tsv(std::span<const ConsistencyRow> rows);
// `area_index start count smoothed`.
std::string fig1_tsv(const FrequencyTrack& track, std::span<const double> smoothed);
// `k p_ge1 p_ge2 p_eq3`.
std::string sweep_tsv(const SweepResult& sweep);
// `chrom start end effect`, one row per planted segment.
std::string truth_bed(const GroundTruth& truth, const std::string& chrom);
// Per-simulation seeds and detection summaries for a batch.
std::string batch_manifest_tsv(const SimulationBatchResult& batch);

// Writes manifest.tsv plus sim_<i>_array_<j>_areas.tsv under dir.
void write_batch(const std::filesystem::path& dir, const SimulationBatchResult& batch);

}  // namespace tileperm

#endif  // TILEPERM_IO_HPP
