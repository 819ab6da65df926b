#ifndef TILEPERM_NORMALIZE_HPP
#define TILEPERM_NORMALIZE_HPP

#include <span>
#include <string>
#include <vector>

namespace tileperm {

// A set of equal-length expression tracks (columns), log2 scale after
// transform. Rows are probes or spots depending on the pipeline stage.
struct TrackMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> columns;
};

// out_i = log2(values_i + pseudocount). Throws ValidationError on negative
// input or non-positive pseudocount.
std::vector<double> log2_transform(std::span<const double> values, double pseudocount = 1.0);
void log2_transform_inplace(std::span<double> values, double pseudocount = 1.0);

// Quantile normalization: each column's sorted values are replaced by the
// vector of row-wise means of the column-sorted matrix. Within a column,
// ranks are preserved; ties keep original row order (stable sort), so tied
// inputs may map to distinct outputs. Requires >= 2 equal-length columns.
//
// When a sorted row holds identical values in every column the mean is taken
// as that value, which makes the operation exactly idempotent.
void quantile_normalize_inplace(std::vector<std::vector<double>>& columns);
TrackMatrix quantile_normalize(const TrackMatrix& m);

}  // namespace tileperm

#endif  // TILEPERM_NORMALIZE_HPP
