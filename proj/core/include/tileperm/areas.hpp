#ifndef TILEPERM_AREAS_HPP
#define TILEPERM_AREAS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "tileperm/detect.hpp"

namespace tileperm {

// Fixed-length discretization of the tiled region, anchored at region_start.
// Areas are contiguous half-open intervals of exactly area_size bases; a
// trailing partial area is discarded.
struct AreaGrid {
    std::int64_t region_start = 0;
    std::int64_t region_end = 0;
    std::int64_t area_size = 100;
    std::size_t n_areas = 0;

    std::int64_t area_start(std::size_t i) const {
        return region_start + static_cast<std::int64_t>(i) * area_size;
    }
    std::int64_t area_end(std::size_t i) const { return area_start(i) + area_size; }

    bool operator==(const AreaGrid&) const = default;
};

AreaGrid area_grid(std::int64_t region_start, std::int64_t region_end,
                   std::int64_t area_size = 100);

// Boolean expressed/not call per area of a grid.
struct AreaCalls {
    AreaGrid grid;
    std::vector<std::uint8_t> bits;
};

// An area is expressed iff its full interval lies inside a single expressed
// region. Regions must be disjoint and sorted.
AreaCalls call_areas(std::span<const Region> regions, const AreaGrid& grid);

}  // namespace tileperm

#endif  // TILEPERM_AREAS_HPP
