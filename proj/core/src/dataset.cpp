#include "tileperm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "tileperm/errors.hpp"

namespace tileperm {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line_no = 0;  // 1-based, last line returned

    bool next(std::string_view& out) {
        if (pos >= text.size()) return false;
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        out = text.substr(pos, nl - pos);
        if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
        pos = nl + 1;
        ++line_no;
        return true;
    }
};

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void fail(const std::string& what, std::size_t line) {
    throw ParseError(what + ", line " + std::to_string(line));
}

std::int64_t parse_int(std::string_view f, const char* name, std::size_t line) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size())
        fail(std::string("non-numeric ") + name + " '" + std::string(f) + "'", line);
    return v;
}

double parse_real(std::string_view f, const char* name, std::size_t line) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size())
        fail(std::string("non-numeric ") + name + " '" + std::string(f) + "'", line);
    return v;
}

// `#key=value` directive, or a plain comment when there is no '='.
bool parse_directive(std::string_view line, std::string_view& key, std::string_view& value) {
    if (line.empty() || line[0] != '#') return false;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) return false;
    key = line.substr(1, eq - 1);
    value = line.substr(eq + 1);
    return true;
}

}  // namespace

void ProbeLayout::finalize() {
    if (probes.empty()) throw ValidationError("layout has no probes");
    if (probe_length <= 0) throw ValidationError("probe_length must be positive");
    if (tile_step <= 0) throw ValidationError("tile_step must be positive");

    for (std::size_t i = 1; i < probes.size(); ++i)
        if (probes[i].start <= probes[i - 1].start)
            throw ValidationError("probe starts not strictly increasing at probe '" +
                                  probes[i].id + "'");

    if (spots.empty()) throw ValidationError("layout has no spots");
    if (spots.size() % probes.size() != 0)
        throw ValidationError("spot count is not a multiple of probe count");
    const std::uint32_t r = static_cast<std::uint32_t>(spots.size() / probes.size());
    n_replicates = r;

    spot_of_.assign(probes.size() * r, UINT32_MAX);
    std::uint32_t max_container = 0;
    for (std::size_t s = 0; s < spots.size(); ++s) {
        const Spot& sp = spots[s];
        if (sp.probe >= probes.size()) throw ValidationError("spot references unknown probe");
        if (sp.replicate >= r)
            throw ValidationError("probe '" + probes[sp.probe].id + "' has replicate " +
                                  std::to_string(sp.replicate) + " outside 0.." +
                                  std::to_string(r - 1));
        auto& slot = spot_of_[static_cast<std::size_t>(sp.probe) * r + sp.replicate];
        if (slot != UINT32_MAX)
            throw ValidationError("duplicate spot " + probes[sp.probe].id + ":" +
                                  std::to_string(sp.replicate));
        slot = static_cast<std::uint32_t>(s);
        max_container = std::max(max_container, sp.container);
    }
    for (std::size_t i = 0; i < spot_of_.size(); ++i)
        if (spot_of_[i] == UINT32_MAX)
            throw ValidationError("probe '" + probes[i / r].id + "' is missing replicate " +
                                  std::to_string(i % r));

    // replicates of one probe must sit in distinct containers
    std::vector<std::uint32_t> seen;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        seen.clear();
        for (std::uint32_t rep = 0; rep < r; ++rep)
            seen.push_back(spots[spot_of_[p * r + rep]].container);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
            throw ValidationError("probe '" + probes[p].id + "' repeats a container");
    }
    if (n_containers == 0) n_containers = max_container + 1;
    if (max_container >= n_containers)
        throw ValidationError("container index exceeds container count");

    if (region_start == 0 && region_end == 0) {
        region_start = probes.front().start;
        region_end = probes.back().start + probe_length;
    }
    if (region_end <= region_start)
        throw ValidationError("region_end must exceed region_start");
}

ProbeLayout parse_layout(std::string_view text) {
    ProbeLayout layout;
    LineReader reader{text};
    std::string_view line;

    bool saw_header = false;
    std::unordered_map<std::string, std::uint32_t> probe_index;
    std::unordered_set<std::uint64_t> spot_seen;  // probe << 32 | replicate
    std::string current_probe;

    while (reader.next(line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string_view key, value;
            if (!parse_directive(line, key, value)) continue;
            if (key == "probe_length")
                layout.probe_length = parse_int(value, "probe_length", reader.line_no);
            else if (key == "tile_step")
                layout.tile_step = parse_int(value, "tile_step", reader.line_no);
            else if (key == "region_start")
                layout.region_start = parse_int(value, "region_start", reader.line_no);
            else if (key == "region_end")
                layout.region_end = parse_int(value, "region_end", reader.line_no);
            // unknown directives are comments
            continue;
        }
        if (!saw_header) {
            if (line != "probe_id\tchrom\tstart\tgc\treplicate\tcontainer")
                fail("bad layout header '" + std::string(line) + "'", reader.line_no);
            saw_header = true;
            continue;
        }

        const auto f = split_tabs(line);
        if (f.size() != 6) fail("expected 6 tab-separated fields", reader.line_no);
        const std::string id(f[0]);
        if (id.empty()) fail("empty probe_id", reader.line_no);
        const std::string_view chrom = f[1];
        const std::int64_t start = parse_int(f[2], "start", reader.line_no);
        const double gc = parse_real(f[3], "gc", reader.line_no);
        const std::int64_t replicate = parse_int(f[4], "replicate", reader.line_no);
        const std::int64_t container = parse_int(f[5], "container", reader.line_no);

        if (gc < 0.0 || gc > 1.0 || !std::isfinite(gc)) fail("gc out of range", reader.line_no);
        if (replicate < 0) fail("negative replicate", reader.line_no);
        if (container < 0) fail("negative container", reader.line_no);

        if (layout.chrom.empty())
            layout.chrom = std::string(chrom);
        else if (chrom != layout.chrom)
            fail("mixed chromosomes ('" + layout.chrom + "' vs '" + std::string(chrom) + "')",
                 reader.line_no);

        std::uint32_t pidx;
        auto it = probe_index.find(id);
        if (it == probe_index.end()) {
            pidx = static_cast<std::uint32_t>(layout.probes.size());
            probe_index.emplace(id, pidx);
            layout.probes.push_back(Probe{id, start, gc});
            if (pidx > 0 && start <= layout.probes[pidx - 1].start)
                fail("probe starts not strictly increasing", reader.line_no);
            current_probe = id;
        } else {
            pidx = it->second;
            if (id != current_probe) fail("rows not grouped by probe_id", reader.line_no);
            const Probe& p = layout.probes[pidx];
            if (p.start != start || p.gc != gc)
                fail("inconsistent probe fields for '" + id + "'", reader.line_no);
        }

        const std::uint64_t key =
            (static_cast<std::uint64_t>(pidx) << 32) | static_cast<std::uint64_t>(replicate);
        if (!spot_seen.insert(key).second)
            fail("duplicate spot " + id + ":" + std::to_string(replicate), reader.line_no);
        layout.spots.push_back(Spot{pidx, static_cast<std::uint32_t>(replicate),
                                    static_cast<std::uint32_t>(container)});
    }

    if (!saw_header) throw ParseError("layout header line missing");
    layout.finalize();
    return layout;
}

std::string write_layout(const ProbeLayout& layout) {
    std::string out;
    out.reserve(64 + layout.spots.size() * 48);
    out += "#probe_length=" + std::to_string(layout.probe_length) + "\n";
    out += "#tile_step=" + std::to_string(layout.tile_step) + "\n";
    out += "#region_start=" + std::to_string(layout.region_start) + "\n";
    out += "#region_end=" + std::to_string(layout.region_end) + "\n";
    out += "probe_id\tchrom\tstart\tgc\treplicate\tcontainer\n";
    for (const Spot& sp : layout.spots) {
        const Probe& p = layout.probes[sp.probe];
        out += p.id;
        out += '\t';
        out += layout.chrom;
        out += '\t';
        out += std::to_string(p.start);
        out += '\t';
        out += fmt_double(p.gc);
        out += '\t';
        out += std::to_string(sp.replicate);
        out += '\t';
        out += std::to_string(sp.container);
        out += '\n';
    }
    return out;
}

SpotIntensities parse_intensities(std::string_view text, const ProbeLayout& layout,
                                  std::string_view default_array_id) {
    SpotIntensities result;
    result.array_id = std::string(default_array_id);
    result.values.assign(layout.n_spots(), -1.0);
    std::vector<std::uint8_t> seen(layout.n_spots(), 0);

    std::unordered_map<std::string_view, std::uint32_t> probe_index;
    probe_index.reserve(layout.n_probes());
    for (std::uint32_t i = 0; i < layout.n_probes(); ++i)
        probe_index.emplace(layout.probes[i].id, i);

    LineReader reader{text};
    std::string_view line;
    bool saw_header = false;
    while (reader.next(line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string_view key, value;
            if (parse_directive(line, key, value) && key == "array_id")
                result.array_id = std::string(value);
            continue;
        }
        if (!saw_header) {
            if (line != "probe_id\treplicate\tvalue")
                fail("bad intensity header '" + std::string(line) + "'", reader.line_no);
            saw_header = true;
            continue;
        }
        const auto f = split_tabs(line);
        if (f.size() != 3) fail("expected 3 tab-separated fields", reader.line_no);
        auto it = probe_index.find(f[0]);
        if (it == probe_index.end())
            fail("unknown probe_id '" + std::string(f[0]) + "'", reader.line_no);
        const std::int64_t replicate = parse_int(f[1], "replicate", reader.line_no);
        if (replicate < 0 || replicate >= layout.n_replicates)
            fail("replicate out of range", reader.line_no);
        const double value = parse_real(f[2], "value", reader.line_no);
        if (value < 0.0) fail("negative intensity", reader.line_no);
        if (!std::isfinite(value)) fail("non-finite intensity", reader.line_no);

        const std::size_t idx =
            layout.spot_index(it->second, static_cast<std::uint32_t>(replicate));
        if (seen[idx])
            fail("duplicate spot " + std::string(f[0]) + ":" + std::to_string(replicate),
                 reader.line_no);
        seen[idx] = 1;
        result.values[idx] = value;
    }
    if (!saw_header) throw ParseError("intensity header line missing");

    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) {
            const Spot& sp = layout.spots[i];
            throw ParseError("missing spot " + layout.probes[sp.probe].id + ":" +
                             std::to_string(sp.replicate));
        }
    }
    return result;
}

std::string write_intensities(const SpotIntensities& spots, const ProbeLayout& layout) {
    if (spots.values.size() != layout.n_spots())
        throw ValidationError("intensity vector does not match layout spot count");
    std::string out;
    out.reserve(64 + spots.values.size() * 32);
    out += "#array_id=" + spots.array_id + "\n";
    out += "probe_id\treplicate\tvalue\n";
    for (std::size_t i = 0; i < layout.spots.size(); ++i) {
        const Spot& sp = layout.spots[i];
        out += layout.probes[sp.probe].id;
        out += '\t';
        out += std::to_string(sp.replicate);
        out += '\t';
        out += fmt_double(spots.values[i]);
        out += '\n';
    }
    return out;
}

DatasetBundle validate_bundle(ProbeLayout layout, std::vector<SpotIntensities> arrays,
                              std::string meta) {
    if (arrays.size() != 3) throw ValidationError("exactly 3 arrays required");
    for (const SpotIntensities& a : arrays) {
        if (a.array_id.empty()) throw ValidationError("array with empty array_id");
        if (a.values.size() != layout.n_spots()) {
            // name the first spot the short array is missing
            const std::size_t idx = std::min(a.values.size(), layout.n_spots() - 1);
            const Spot& sp = layout.spots[idx];
            throw ValidationError("array '" + a.array_id + "' missing spot " +
                                  layout.probes[sp.probe].id + ":" +
                                  std::to_string(sp.replicate));
        }
        for (double v : a.values)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("array '" + a.array_id + "' has invalid intensity");
    }
    if (arrays[0].array_id == arrays[1].array_id || arrays[0].array_id == arrays[2].array_id ||
        arrays[1].array_id == arrays[2].array_id)
        throw ValidationError("duplicate array_id");

    DatasetBundle bundle;
    bundle.layout = std::move(layout);
    bundle.arrays = {std::move(arrays[0]), std::move(arrays[1]), std::move(arrays[2])};
    bundle.meta = std::move(meta);
    return bundle;
}

}  // namespace tileperm
