#include "vasc/segmentation.hpp"

#include <vector>

#include "vasc/errors.hpp"

namespace vasc {

GrowParams vessel_preset(VoxelIndex seed) {
    GrowParams p;
    p.lo = 1500.0;
    p.hi = std::numeric_limits<double>::infinity();
    p.seed = seed;
    p.conn = Connectivity::C26;
    return p;
}

GrowParams tissue_preset(VoxelIndex seed) {
    GrowParams p;
    p.lo = 600.0;
    p.hi = 1200.0;
    p.seed = seed;
    p.conn = Connectivity::C6;
    return p;
}

BinaryMask region_grow(const Volume3D& vol, const GrowParams& p) {
    const Grid& g = vol.grid;
    if (!g.in_bounds(p.seed)) throw BoundsError("region_grow: seed out of bounds");
    if (p.lo > p.hi) throw InvalidParameter("region_grow: lo > hi");
    const auto inside = [&](float v) { return double(v) >= p.lo && double(v) <= p.hi; };
    if (!inside(vol.at(p.seed)))
        throw SeedOutsideRange("region_grow: seed value outside [lo, hi]");

    BinaryMask mask(g);
    const auto& offs = neighbor_offsets(p.conn);
    std::vector<std::size_t> work;
    work.push_back(g.lin(p.seed));
    mask.membership[work.back()] = 1;
    while (!work.empty()) {
        const std::size_t cur = work.back();
        work.pop_back();
        const VoxelIndex v = g.unlin(cur);
        for (const auto& d : offs) {
            const VoxelIndex n{v.i + d[0], v.j + d[1], v.k + d[2]};
            if (!g.in_bounds(n)) continue;
            const std::size_t nl = g.lin(n);
            if (mask.membership[nl]) continue;
            if (!inside(vol.values[nl])) continue;
            mask.membership[nl] = 1;
            work.push_back(nl);
        }
    }
    return mask;
}

std::size_t count_components(const BinaryMask& mask, Connectivity conn) {
    const Grid& g = mask.grid;
    const std::size_t n = g.size();
    std::vector<std::uint8_t> seen(n, 0);
    const auto& offs = neighbor_offsets(conn);
    std::vector<std::size_t> work;
    std::size_t components = 0;
    for (std::size_t start = 0; start < n; ++start) {
        if (!mask.membership[start] || seen[start]) continue;
        ++components;
        seen[start] = 1;
        work.push_back(start);
        while (!work.empty()) {
            const std::size_t cur = work.back();
            work.pop_back();
            const VoxelIndex v = g.unlin(cur);
            for (const auto& d : offs) {
                const VoxelIndex nb{v.i + d[0], v.j + d[1], v.k + d[2]};
                if (!g.in_bounds(nb)) continue;
                const std::size_t nl = g.lin(nb);
                if (!mask.membership[nl] || seen[nl]) continue;
                seen[nl] = 1;
                work.push_back(nl);
            }
        }
    }
    return components;
}

} // namespace vasc
