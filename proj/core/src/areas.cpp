#include "tileperm/areas.hpp"

#include <algorithm>

#include "tileperm/errors.hpp"

namespace tileperm {

AreaGrid area_grid(std::int64_t region_start, std::int64_t region_end, std::int64_t area_size) {
    if (area_size < 1) throw ValidationError("area_size must be positive");
    if (region_end <= region_start) throw ValidationError("empty region for area grid");
    AreaGrid grid;
    grid.region_start = region_start;
    grid.region_end = region_end;
    grid.area_size = area_size;
    grid.n_areas = static_cast<std::size_t>((region_end - region_start) / area_size);
    return grid;
}

AreaCalls call_areas(std::span<const Region> regions, const AreaGrid& grid) {
    AreaCalls calls;
    calls.grid = grid;
    calls.bits.assign(grid.n_areas, 0);
    const std::int64_t g0 = grid.region_start;
    const std::int64_t sz = grid.area_size;
    for (const Region& r : regions) {
        // first area fully inside [r.start, r.end), i.e. area start >= r.start
        std::int64_t lo = r.start - g0;
        std::int64_t first = lo <= 0 ? 0 : (lo + sz - 1) / sz;
        // last area with end <= r.end
        std::int64_t hi = r.end - g0;
        std::int64_t last = hi / sz;  // exclusive
        first = std::max<std::int64_t>(first, 0);
        last = std::min<std::int64_t>(last, static_cast<std::int64_t>(grid.n_areas));
        for (std::int64_t a = first; a < last; ++a) calls.bits[static_cast<std::size_t>(a)] = 1;
    }
    return calls;
}

}  // namespace tileperm
