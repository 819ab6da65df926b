#include "tileperm/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tileperm/errors.hpp"

namespace tileperm {

std::vector<double> log2_transform(std::span<const double> values, double pseudocount) {
    std::vector<double> out(values.begin(), values.end());
    log2_transform_inplace(out, pseudocount);
    return out;
}

void log2_transform_inplace(std::span<double> values, double pseudocount) {
    if (!(pseudocount > 0.0)) throw ValidationError("pseudocount must be positive");
    for (double& v : values) {
        if (!std::isfinite(v)) throw ValidationError("non-finite intensity");
        if (v < 0.0) throw ValidationError("negative intensity");
        v = std::log2(v + pseudocount);
    }
}

void quantile_normalize_inplace(std::vector<std::vector<double>>& columns) {
    const std::size_t k = columns.size();
    if (k < 2) throw ValidationError("quantile normalization needs at least 2 columns");
    const std::size_t n = columns[0].size();
    for (const auto& col : columns)
        if (col.size() != n) throw ValidationError("ragged columns");
    if (n == 0) return;

    // Stable order per column: ties keep original row index.
    std::vector<std::vector<std::uint32_t>> order(k);
    for (std::size_t c = 0; c < k; ++c) {
        auto& ord = order[c];
        ord.resize(n);
        std::iota(ord.begin(), ord.end(), 0u);
        const auto& col = columns[c];
        std::stable_sort(ord.begin(), ord.end(),
                         [&col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }

    // Row means of the column-sorted matrix. A rank row whose values are all
    // identical maps to that value, keeping the operation exactly idempotent.
    std::vector<double> mean(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v0 = columns[0][order[0][i]];
        bool all_equal = true;
        double sum = v0;
        for (std::size_t c = 1; c < k; ++c) {
            const double v = columns[c][order[c][i]];
            all_equal = all_equal && v == v0;
            sum += v;
        }
        mean[i] = all_equal ? v0 : sum / static_cast<double>(k);
    }

    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < n; ++i) columns[c][order[c][i]] = mean[i];
}

TrackMatrix quantile_normalize(const TrackMatrix& m) {
    TrackMatrix out = m;
    quantile_normalize_inplace(out.columns);
    return out;
}

}  // namespace tileperm
