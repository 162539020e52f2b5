#include "vasc/skeleton.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>

#include "vasc/distance.hpp"
#include "vasc/errors.hpp"

namespace vasc {

namespace {

// Fixed enumeration of the 26 neighborhood offsets (z, then y, then x slowest
// to fastest, matching neighbor_offsets(C26)).
struct NbTables {
    std::array<std::array<int, 3>, 26> off;
    std::array<std::uint32_t, 26> adj26{};  // offset pairs that are 26-adjacent
    std::array<std::uint32_t, 26> adj6{};   // offset pairs that are 6-adjacent
    std::uint32_t in18 = 0;                 // offsets inside the 18-neighborhood
    std::uint32_t faces = 0;                // the six face offsets

    NbTables() {
        int n = 0;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    off[n] = {dx, dy, dz};
                    const int l1 = std::abs(dx) + std::abs(dy) + std::abs(dz);
                    if (l1 <= 2) in18 |= 1u << n;
                    if (l1 == 1) faces |= 1u << n;
                    ++n;
                }
        for (int a = 0; a < 26; ++a)
            for (int b = 0; b < 26; ++b) {
                if (a == b) continue;
                const int ddx = std::abs(off[a][0] - off[b][0]);
                const int ddy = std::abs(off[a][1] - off[b][1]);
                const int ddz = std::abs(off[a][2] - off[b][2]);
                if (ddx <= 1 && ddy <= 1 && ddz <= 1) adj26[a] |= 1u << b;
                if (ddx + ddy + ddz == 1) adj6[a] |= 1u << b;
            }
    }
};

const NbTables& tables() {
    static const NbTables t;
    return t;
}

// Foreground configuration bitmask of the 26-neighborhood of v.
std::uint32_t neighborhood_config(const BinaryMask& mask, const VoxelIndex& v) {
    const NbTables& t = tables();
    const Grid& g = mask.grid;
    std::uint32_t cfg = 0;
    for (int b = 0; b < 26; ++b) {
        const VoxelIndex n{v.i + t.off[b][0], v.j + t.off[b][1], v.k + t.off[b][2]};
        if (g.in_bounds(n) && mask.membership[g.lin(n)]) cfg |= 1u << b;
    }
    return cfg;
}

int component_count(std::uint32_t set, const std::array<std::uint32_t, 26>& adj,
                    std::uint32_t seeds) {
    int count = 0;
    std::uint32_t unseen = set;
    while (true) {
        const std::uint32_t seed_bits = unseen & seeds;
        if (!seed_bits) break;
        ++count;
        std::uint32_t comp = seed_bits & (~seed_bits + 1);  // lowest seed bit
        while (true) {
            std::uint32_t grow = comp;
            std::uint32_t bits = comp;
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                grow |= adj[b] & set;
            }
            if (grow == comp) break;
            comp = grow;
        }
        unseen &= ~comp;
    }
    return count;
}

bool simple_config(std::uint32_t cfg) {
    const NbTables& t = tables();
    // Exactly one 26-component of foreground neighbors (all are adjacent to
    // the center), and exactly one 6-component of background within the
    // 18-neighborhood touching a face neighbor.
    if (component_count(cfg, t.adj26, cfg) != 1) return false;
    const std::uint32_t bg18 = ~cfg & t.in18;
    return component_count(bg18, t.adj6, t.faces) == 1;
}

} // namespace

bool is_simple_point(const BinaryMask& mask, std::size_t lin) {
    return simple_config(neighborhood_config(mask, mask.grid.unlin(lin)));
}

Skeleton thin(const BinaryMask& mask) {
    const Grid& g = mask.grid;
    if (mask.count() == 0) throw EmptyMask("thin: mask is empty");

    // Distance-to-background priority: voxels closest to the surface are
    // removed first, which keeps the skeleton on the medial axis.
    std::vector<double> priority;
    {
        BinaryMask background(g);
        bool any_bg = false;
        for (std::size_t p = 0; p < g.size(); ++p) {
            const std::uint8_t bg = mask.membership[p] ? 0 : 1;
            background.membership[p] = bg;
            any_bg = any_bg || bg;
        }
        if (any_bg)
            priority = distance_transform(background, false).dist2;
        else
            priority.assign(g.size(), 0.0);
    }

    BinaryMask cur = mask;
    std::vector<std::size_t> fg;
    for (std::size_t p = 0; p < g.size(); ++p)
        if (cur.membership[p]) fg.push_back(p);

    static constexpr std::array<std::array<int, 3>, 6> directions{
        {{0, 0, -1}, {0, 0, 1}, {0, -1, 0}, {0, 1, 0}, {-1, 0, 0}, {1, 0, 0}}};

    std::vector<std::size_t> candidates;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& dir : directions) {
            candidates.clear();
            for (const std::size_t p : fg) {
                if (!cur.membership[p]) continue;
                const VoxelIndex v = g.unlin(p);
                const VoxelIndex b{v.i + dir[0], v.j + dir[1], v.k + dir[2]};
                if (g.in_bounds(b) && cur.membership[g.lin(b)]) continue;  // not a border voxel
                const std::uint32_t cfg = neighborhood_config(cur, v);
                if (std::popcount(cfg) <= 1) continue;  // endpoint, keep
                if (simple_config(cfg)) candidates.push_back(p);
            }
            std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
                if (priority[a] != priority[b]) return priority[a] < priority[b];
                return a < b;
            });
            // Remove by parity subfield so no two deletions in one batch are
            // 26-adjacent.  Within a subfield each removal leaves the others'
            // neighborhoods untouched, so the sequential re-check below is
            // equivalent to simultaneous removal and cannot cascade down a
            // two-voxel-wide ridge (which would retract whole branches whose
            // medial locus falls between voxel centers).
            for (int field = 0; field < 8; ++field) {
                for (const std::size_t p : candidates) {
                    if (!cur.membership[p]) continue;
                    const VoxelIndex v = g.unlin(p);
                    const int par = (v.i & 1) | ((v.j & 1) << 1) | ((v.k & 1) << 2);
                    if (par != field) continue;
                    const std::uint32_t cfg = neighborhood_config(cur, v);
                    if (std::popcount(cfg) <= 1) continue;
                    if (!simple_config(cfg)) continue;
                    cur.membership[p] = 0;
                    changed = true;
                }
            }
        }
        fg.erase(std::remove_if(fg.begin(), fg.end(),
                                [&](std::size_t p) { return !cur.membership[p]; }),
                 fg.end());
    }
    return Skeleton{std::move(cur)};
}

std::vector<VoxelClass> classify(const Skeleton& skel) {
    const Grid& g = skel.mask.grid;
    std::vector<VoxelClass> out(g.size(), VoxelClass::Background);
    const auto& offs = neighbor_offsets(Connectivity::C26);
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!skel.mask.membership[p]) continue;
        const VoxelIndex v = g.unlin(p);
        int nn = 0;
        for (const auto& d : offs) {
            const VoxelIndex n{v.i + d[0], v.j + d[1], v.k + d[2]};
            if (g.in_bounds(n) && skel.mask.membership[g.lin(n)]) ++nn;
        }
        out[p] = nn <= 1 ? VoxelClass::Endpoint
                         : (nn == 2 ? VoxelClass::Regular : VoxelClass::Junction);
    }
    return out;
}

} // namespace vasc
