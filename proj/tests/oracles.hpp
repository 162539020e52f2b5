// Brute-force reference implementations used only by tests. They must stay
// independent of the library code paths they check.
#ifndef VASC_TEST_ORACLES_HPP
#define VASC_TEST_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "vasc/volume.hpp"

namespace oracles {

using vasc::BinaryMask;
using vasc::Connectivity;
using vasc::Grid;
using vasc::VoxelIndex;

// O(n^2) all-pairs nearest-feature search. Returns squared distances in grid
// units scaled by spacing (µm²) and, per voxel, the lowest linear index among
// co-minimal feature voxels.
struct BruteEdt {
    std::vector<double> dist2;
    std::vector<std::int64_t> nearest;
};

inline BruteEdt brute_force_edt(const BinaryMask& feature) {
    const Grid& g = feature.grid;
    std::vector<std::size_t> feats;
    for (std::size_t p = 0; p < g.size(); ++p)
        if (feature.membership[p]) feats.push_back(p);
    BruteEdt out;
    out.dist2.assign(g.size(), std::numeric_limits<double>::infinity());
    out.nearest.assign(g.size(), -1);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const VoxelIndex v = g.unlin(p);
        for (const std::size_t f : feats) {
            const VoxelIndex w = g.unlin(f);
            const double dx = (v.i - w.i) * g.spacing[0];
            const double dy = (v.j - w.j) * g.spacing[1];
            const double dz = (v.k - w.k) * g.spacing[2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 < out.dist2[p]) {
                out.dist2[p] = d2;
                out.nearest[p] = std::int64_t(f);
            }
        }
    }
    return out;
}

// Breadth-first flood fill over [lo, hi] from the seed.
inline BinaryMask brute_force_flood(const vasc::Volume3D& vol, double lo, double hi,
                                    VoxelIndex seed, Connectivity conn) {
    const Grid& g = vol.grid;
    BinaryMask out(g);
    std::queue<VoxelIndex> q;
    q.push(seed);
    out.set(seed);
    while (!q.empty()) {
        const VoxelIndex v = q.front();
        q.pop();
        for (const VoxelIndex& n : vasc::neighbors(v, g.dims, conn)) {
            if (out.test(n)) continue;
            const double x = vol.at(n);
            if (x < lo || x > hi) continue;
            out.set(n);
            q.push(n);
        }
    }
    return out;
}

// Union-find over all adjacent true-voxel pairs.
inline std::size_t brute_force_components(const BinaryMask& mask, Connectivity conn) {
    const Grid& g = mask.grid;
    std::vector<std::size_t> parent(g.size());
    std::iota(parent.begin(), parent.end(), std::size_t(0));
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!mask.membership[p]) continue;
        for (const VoxelIndex& n : vasc::neighbors(g.unlin(p), g.dims, conn)) {
            const std::size_t q = g.lin(n);
            if (mask.membership[q]) parent[find(p)] = find(q);
        }
    }
    std::set<std::size_t> roots;
    for (std::size_t p = 0; p < g.size(); ++p)
        if (mask.membership[p]) roots.insert(find(p));
    return roots.size();
}

// Euler characteristic of the union of closed unit cubes (one per true voxel):
// V - E + F - C over the distinct cells of the cubical complex. Together with
// the 26-component count this pins the topology of small test volumes.
inline long long euler_characteristic(const BinaryMask& mask) {
    const Grid& g = mask.grid;
    std::set<std::array<int, 3>> verts;
    std::set<std::array<int, 4>> edges;   // (x,y,z,axis)
    std::set<std::array<int, 4>> faces;   // (x,y,z,normal axis)
    long long cubes = 0;
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (!mask.membership[p]) continue;
        const VoxelIndex v = g.unlin(p);
        ++cubes;
        for (int dz = 0; dz <= 1; ++dz)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dx = 0; dx <= 1; ++dx)
                    verts.insert({v.i + dx, v.j + dy, v.k + dz});
        for (int axis = 0; axis < 3; ++axis)
            for (int u = 0; u <= 1; ++u)
                for (int w = 0; w <= 1; ++w) {
                    // Edge along `axis` at corner offset (u, w) of the other axes.
                    std::array<int, 4> e{v.i, v.j, v.k, axis};
                    e[std::size_t((axis + 1) % 3)] += u;
                    e[std::size_t((axis + 2) % 3)] += w;
                    edges.insert(e);
                }
        for (int axis = 0; axis < 3; ++axis)
            for (int side = 0; side <= 1; ++side) {
                std::array<int, 4> f{v.i, v.j, v.k, axis};
                f[std::size_t(axis)] += side;
                faces.insert(f);
            }
    }
    return (long long)(verts.size()) - (long long)(edges.size()) + (long long)(faces.size()) -
           cubes;
}

} // namespace oracles

#endif
