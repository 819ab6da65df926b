#include "tileperm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "tileperm/errors.hpp"
#include "tileperm/parallel.hpp"

namespace tileperm {

void DetectParams::validate(std::int64_t probe_length) const {
    if (window_size < probe_length)
        throw ValidationError("window_size must be at least the probe length");
    if (permutations < 1) throw ValidationError("permutations must be at least 1");
    if (gc_bins < 1) throw ValidationError("gc_bins must be at least 1");
    const std::size_t floor_m = trim_mode == TrimMode::trim_extremes ? 3 : 1;
    if (min_probes < floor_m)
        throw ValidationError("min_probes too small for the trim mode (need " +
                              std::to_string(floor_m) + ")");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0, 1)");
    if (merge_gap < 0) throw ValidationError("merge_gap must be non-negative");
}

std::vector<std::uint32_t> assign_gc_bins(std::span<const double> gc, std::uint32_t bins) {
    const std::size_t n = gc.size();
    if (bins < 1) throw ValidationError("gc_bins must be at least 1");
    if (bins > n) throw ValidationError("more GC bins than probes");

    std::vector<std::uint32_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0u);
    std::stable_sort(rank.begin(), rank.end(),
                     [&gc](std::uint32_t a, std::uint32_t b) { return gc[a] < gc[b]; });

    // Contiguous rank blocks [b*n/B, (b+1)*n/B); sizes differ by at most 1.
    std::vector<std::uint32_t> bin(n);
    for (std::uint32_t b = 0; b < bins; ++b) {
        const std::size_t lo = n * b / bins;
        const std::size_t hi = n * (b + 1) / bins;
        for (std::size_t i = lo; i < hi; ++i) bin[rank[i]] = b;
    }
    return bin;
}

std::vector<std::vector<std::uint32_t>> bin_members(std::span<const std::uint32_t> bins,
                                                    std::uint32_t n_bins) {
    std::vector<std::vector<std::uint32_t>> members(n_bins);
    for (std::uint32_t i = 0; i < bins.size(); ++i) members[bins[i]].push_back(i);
    return members;
}

std::vector<WindowRange> build_windows(std::span<const std::int64_t> positions,
                                       std::int64_t window_size, std::size_t min_probes) {
    std::vector<WindowRange> windows;
    const std::size_t n = positions.size();
    std::size_t last = 0;
    for (std::size_t first = 0; first < n;) {
        const std::int64_t anchor = positions[first];
        if (last < first) last = first;
        while (last < n && positions[last] < anchor + window_size) ++last;
        if (last - first >= min_probes) {
            if (windows.empty() || windows.back().first != first || windows.back().last != last)
                windows.push_back(WindowRange{anchor, static_cast<std::uint32_t>(first),
                                              static_cast<std::uint32_t>(last)});
        }
        // advance to the next distinct anchor position
        std::size_t next = first;
        while (next < n && positions[next] == anchor) ++next;
        first = next;
    }
    return windows;
}

double window_score(std::span<const double> values, TrimMode mode) {
    const std::size_t n = values.size();
    if (mode == TrimMode::trim_extremes) {
        if (n < 3) throw ValidationError("trim-extremes needs at least 3 values");
        double sum = 0.0, mx = values[0], mn = values[0];
        for (double v : values) {
            sum += v;
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        return (sum - mx - mn) / static_cast<double>(n - 2);
    }
    if (n < 1) throw ValidationError("median needs at least 1 value");
    std::vector<double> s(values.begin(), values.end());
    const std::size_t m = n / 2;
    std::nth_element(s.begin(), s.begin() + m, s.end());
    double med = s[m];
    if (n % 2 == 0) {
        const double lower = *std::max_element(s.begin(), s.begin() + m);
        med = (med + lower) / 2.0;
    }
    return med;
}

namespace {

// All trim-extremes scores in one pass: prefix sums plus monotonic deques for
// the sliding max/min. Window ranges have non-decreasing first and last, so
// each entry enters and leaves each deque once.
void scores_trim_extremes(std::span<const double> values, std::span<const WindowRange> windows,
                          std::span<double> out, std::vector<double>& prefix) {
    const std::size_t n = values.size();
    prefix.resize(n + 1);
    prefix[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];

    std::deque<std::uint32_t> maxdq, mindq;
    std::uint32_t added = 0;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const WindowRange& win = windows[w];
        while (added < win.last) {
            const double v = values[added];
            while (!maxdq.empty() && values[maxdq.back()] <= v) maxdq.pop_back();
            maxdq.push_back(added);
            while (!mindq.empty() && values[mindq.back()] >= v) mindq.pop_back();
            mindq.push_back(added);
            ++added;
        }
        while (maxdq.front() < win.first) maxdq.pop_front();
        while (mindq.front() < win.first) mindq.pop_front();
        const double sum = prefix[win.last] - prefix[win.first];
        const double mx = values[maxdq.front()];
        const double mn = values[mindq.front()];
        out[w] = (sum - mx - mn) / static_cast<double>(win.last - win.first - 2);
    }
}

void scores_median(std::span<const double> values, std::span<const WindowRange> windows,
                   std::span<double> out, std::vector<double>& scratch) {
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const WindowRange& win = windows[w];
        scratch.assign(values.begin() + win.first, values.begin() + win.last);
        const std::size_t n = scratch.size();
        const std::size_t m = n / 2;
        std::nth_element(scratch.begin(), scratch.begin() + m, scratch.end());
        double med = scratch[m];
        if (n % 2 == 0) {
            const double lower = *std::max_element(scratch.begin(), scratch.begin() + m);
            med = (med + lower) / 2.0;
        }
        out[w] = med;
    }
}

}  // namespace

void window_scores(std::span<const double> values, std::span<const WindowRange> windows,
                   TrimMode mode, std::span<double> out) {
    std::vector<double> scratch;
    if (mode == TrimMode::trim_extremes)
        scores_trim_extremes(values, windows, out, scratch);
    else
        scores_median(values, windows, out, scratch);
}

void permute_within_bins(std::span<double> values,
                         const std::vector<std::vector<std::uint32_t>>& members, Rng& rng) {
    for (const auto& m : members) {
        for (std::size_t i = m.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i));
            std::swap(values[m[i - 1]], values[m[j]]);
        }
    }
}

std::vector<double> null_distribution(const Track& track, std::span<const WindowRange> windows,
                                      std::span<const std::uint32_t> bins,
                                      const DetectParams& params) {
    const auto members = bin_members(bins, params.gc_bins);
    std::vector<double> pool(static_cast<std::size_t>(params.permutations) * windows.size());
    std::vector<double> permuted(track.values);
    std::vector<double> scores(windows.size());
    std::vector<double> scratch;
    for (std::uint32_t p = 0; p < params.permutations; ++p) {
        std::copy(track.values.begin(), track.values.end(), permuted.begin());
        Rng rng(derive_seed(params.seed, StreamTag::permutation, p));
        permute_within_bins(permuted, members, rng);
        if (params.trim_mode == TrimMode::trim_extremes)
            scores_trim_extremes(permuted, windows, scores, scratch);
        else
            scores_median(permuted, windows, scores, scratch);
        std::copy(scores.begin(), scores.end(), pool.begin() + std::size_t(p) * windows.size());
    }
    std::sort(pool.begin(), pool.end());
    return pool;
}

std::vector<std::uint64_t> null_exceed_counts(const Track& track,
                                              std::span<const WindowRange> windows,
                                              std::span<const std::uint32_t> bins,
                                              std::span<const double> observed,
                                              const DetectParams& params, int n_threads) {
    const std::size_t n_obs = observed.size();
    std::vector<double> sorted_obs(observed.begin(), observed.end());
    std::sort(sorted_obs.begin(), sorted_obs.end());

    const auto members = bin_members(bins, params.gc_bins);
    const std::size_t workers =
        std::min<std::size_t>(params.permutations, static_cast<std::size_t>(std::max(1, n_threads)));

    // hist[w][idx]: permuted scores x with sorted_obs[idx-1] <= x < sorted_obs[idx]
    std::vector<std::vector<std::uint64_t>> hist(workers,
                                                 std::vector<std::uint64_t>(n_obs + 1, 0));
    std::vector<std::uint32_t> perm_worker(params.permutations);
    for (std::uint32_t p = 0; p < params.permutations; ++p) perm_worker[p] = p % workers;

    parallel_for(workers, static_cast<int>(workers), [&](std::size_t w) {
        std::vector<double> permuted(track.values.size());
        std::vector<double> scores(windows.size());
        std::vector<double> scratch;
        auto& h = hist[w];
        for (std::uint32_t p = 0; p < params.permutations; ++p) {
            if (perm_worker[p] != w) continue;
            std::copy(track.values.begin(), track.values.end(), permuted.begin());
            Rng rng(derive_seed(params.seed, StreamTag::permutation, p));
            permute_within_bins(permuted, members, rng);
            if (params.trim_mode == TrimMode::trim_extremes)
                scores_trim_extremes(permuted, windows, scores, scratch);
            else
                scores_median(permuted, windows, scores, scratch);
            for (double x : scores) {
                const std::size_t idx = static_cast<std::size_t>(
                    std::upper_bound(sorted_obs.begin(), sorted_obs.end(), x) -
                    sorted_obs.begin());
                ++h[idx];
            }
        }
    });

    // merge (integer sums, order-free), then suffix-sum into >= counts per
    // sorted position
    std::vector<std::uint64_t> merged(n_obs + 1, 0);
    for (const auto& h : hist)
        for (std::size_t i = 0; i <= n_obs; ++i) merged[i] += h[i];
    std::vector<std::uint64_t> ge_sorted(n_obs, 0);
    std::uint64_t suffix = 0;
    for (std::size_t j = n_obs; j-- > 0;) {
        suffix += merged[j + 1];
        ge_sorted[j] = suffix;
    }

    // map back to input order; equal scores share the same count, so taking
    // the first sorted position with the same value is exact
    std::vector<std::uint64_t> out(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) {
        const std::size_t j = static_cast<std::size_t>(
            std::lower_bound(sorted_obs.begin(), sorted_obs.end(), observed[i]) -
            sorted_obs.begin());
        out[i] = ge_sorted[j];
    }
    return out;
}

std::vector<double> empirical_pvalues(std::span<const double> observed,
                                      std::span<const double> sorted_null_pool) {
    if (sorted_null_pool.empty()) throw ValidationError("empty null pool");
    const double denom = 1.0 + static_cast<double>(sorted_null_pool.size());
    std::vector<double> p(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const auto ge = sorted_null_pool.end() -
                        std::lower_bound(sorted_null_pool.begin(), sorted_null_pool.end(),
                                         observed[i]);
        p[i] = (1.0 + static_cast<double>(ge)) / denom;
    }
    return p;
}

std::vector<double> adjust_multiplicity_bh(std::span<const double> p) {
    const std::size_t m = p.size();
    for (double v : p)
        if (!(v > 0.0 && v <= 1.0)) throw ValidationError("p-value outside (0, 1]");
    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&p](std::uint32_t a, std::uint32_t b) { return p[a] < p[b]; });
    std::vector<double> q(m);
    double running = 1.0;
    for (std::size_t i = m; i-- > 0;) {
        const double raw = p[order[i]] * static_cast<double>(m) / static_cast<double>(i + 1);
        running = std::min(running, raw);
        q[order[i]] = running;
    }
    return q;
}

std::vector<double> adjust_multiplicity_empirical(std::span<const double> observed,
                                                  std::span<const std::uint64_t> null_ge,
                                                  std::uint32_t n_permutations) {
    const std::size_t m = observed.size();
    if (null_ge.size() != m) throw ValidationError("null_ge size mismatch");
    if (n_permutations < 1) throw ValidationError("permutations must be at least 1");

    std::vector<double> sorted_obs(observed.begin(), observed.end());
    std::sort(sorted_obs.begin(), sorted_obs.end());

    std::vector<double> raw(m);
    for (std::size_t i = 0; i < m; ++i) {
        // ties count as >=
        const std::size_t obs_ge = static_cast<std::size_t>(
            sorted_obs.end() -
            std::lower_bound(sorted_obs.begin(), sorted_obs.end(), observed[i]));
        const double expected_false =
            static_cast<double>(null_ge[i]) / static_cast<double>(n_permutations);
        raw[i] = std::min(1.0, expected_false / static_cast<double>(std::max<std::size_t>(1, obs_ge)));
    }

    // monotonize: q(s) = min over thresholds t <= s of raw FDR(t), so q is
    // non-increasing in score
    std::vector<std::uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&observed](std::uint32_t a, std::uint32_t b) {
        return observed[a] < observed[b];
    });
    std::vector<double> q(m);
    double running = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        running = std::min(running, raw[order[i]]);
        q[order[i]] = running;
    }
    return q;
}

std::vector<Region> call_regions(std::span<const WindowStat> windows, double alpha,
                                 std::int64_t merge_gap) {
    std::vector<Region> regions;
    for (const WindowStat& w : windows) {
        if (!(w.q < alpha)) continue;
        if (!regions.empty() && w.start <= regions.back().end + merge_gap) {
            Region& r = regions.back();
            r.end = std::max(r.end, w.end);
            r.max_score = std::max(r.max_score, w.score);
            r.min_p = std::min(r.min_p, w.p);
            r.min_q = std::min(r.min_q, w.q);
        } else {
            regions.push_back(Region{w.start, w.end, w.score, w.p, w.q});
        }
    }
    return regions;
}

DetectionResult detect(const Track& track, const DetectParams& params, int n_threads) {
    const std::size_t n = track.size();
    if (track.gc.size() != n || track.values.size() != n)
        throw ValidationError("track vectors differ in length");
    for (std::size_t i = 1; i < n; ++i)
        if (track.positions[i] < track.positions[i - 1])
            throw ValidationError("track positions not sorted");

    DetectionResult result;
    result.params = params;

    const auto ranges = build_windows(track.positions, params.window_size, params.min_probes);
    if (ranges.empty()) return result;

    const auto bins = assign_gc_bins(track.gc, params.gc_bins);

    std::vector<double> observed(ranges.size());
    window_scores(track.values, ranges, params.trim_mode, observed);

    const auto null_ge = null_exceed_counts(track, ranges, bins, observed, params, n_threads);

    const double pool_size =
        static_cast<double>(params.permutations) * static_cast<double>(ranges.size());
    std::vector<double> p(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i)
        p[i] = (1.0 + static_cast<double>(null_ge[i])) / (1.0 + pool_size);

    std::vector<double> q;
    if (params.mtc_method == MtcMethod::bh)
        q = adjust_multiplicity_bh(p);
    else
        q = adjust_multiplicity_empirical(observed, null_ge, params.permutations);

    result.windows.resize(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        result.windows[i] = WindowStat{ranges[i].start,
                                       ranges[i].start + params.window_size,
                                       ranges[i].first,
                                       ranges[i].last,
                                       observed[i],
                                       p[i],
                                       q[i]};
    }
    result.regions = call_regions(result.windows, params.alpha, params.merge_gap);
    return result;
}

}  // namespace tileperm
