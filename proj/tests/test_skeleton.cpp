#include <doctest.h>

#include <cmath>
#include <random>

#include "vasc/distance.hpp"
#include "vasc/phantom.hpp"
#include "vasc/skeleton.hpp"
#include "vasc/segmentation.hpp"
#include "oracles.hpp"

using namespace vasc;

namespace {

BinaryMask solid_cylinder(int radius, int length) {
    // Axis along z at (c, c), end caps `radius` voxels in from the borders.
    const int c = radius + 2;
    const Dims dims{2 * c + 1, 2 * c + 1, length + 2 * radius + 4};
    BinaryMask m(dims, {1, 1, 1});
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i) {
                if (k < radius + 2 || k >= radius + 2 + length) continue;
                const int dx = i - c, dy = j - c;
                if (dx * dx + dy * dy <= radius * radius) m.set({i, j, k});
            }
    return m;
}

// Union of capsules along a random chain of points: always 26-connected.
BinaryMask random_tube_union(std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coord(4, 23);
    std::uniform_int_distribution<int> nseg(2, 5);
    std::uniform_real_distribution<double> rad(1.5, 3.5);
    const Dims dims{28, 28, 28};
    BinaryMask m(dims, {1, 1, 1});
    std::array<double, 3> prev{double(coord(rng)), double(coord(rng)), double(coord(rng))};
    const int n = nseg(rng);
    for (int s = 0; s < n; ++s) {
        const std::array<double, 3> next{double(coord(rng)), double(coord(rng)),
                                         double(coord(rng))};
        const double r = rad(rng);
        for (int k = 0; k < dims[2]; ++k)
            for (int j = 0; j < dims[1]; ++j)
                for (int i = 0; i < dims[0]; ++i) {
                    const std::array<double, 3> p{double(i), double(j), double(k)};
                    std::array<double, 3> ab{next[0] - prev[0], next[1] - prev[1],
                                             next[2] - prev[2]};
                    const double len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
                    double t = len2 > 0 ? ((p[0] - prev[0]) * ab[0] + (p[1] - prev[1]) * ab[1] +
                                           (p[2] - prev[2]) * ab[2]) /
                                              len2
                                        : 0.0;
                    t = std::clamp(t, 0.0, 1.0);
                    const double dx = p[0] - (prev[0] + t * ab[0]);
                    const double dy = p[1] - (prev[1] + t * ab[1]);
                    const double dz = p[2] - (prev[2] + t * ab[2]);
                    if (dx * dx + dy * dy + dz * dz <= r * r) m.set({i, j, k});
                }
        prev = next;
    }
    return m;
}

bool has_full_2x2x2_block(const BinaryMask& m) {
    const Grid& g = m.grid;
    for (int k = 0; k + 1 < g.dims[2]; ++k)
        for (int j = 0; j + 1 < g.dims[1]; ++j)
            for (int i = 0; i + 1 < g.dims[0]; ++i) {
                bool full = true;
                for (int dz = 0; dz <= 1 && full; ++dz)
                    for (int dy = 0; dy <= 1 && full; ++dy)
                        for (int dx = 0; dx <= 1 && full; ++dx)
                            full = m.test({i + dx, j + dy, k + dz});
                if (full) return true;
            }
    return false;
}

std::array<std::size_t, 3> class_counts(const Skeleton& s) {
    std::array<std::size_t, 3> counts{0, 0, 0};  // endpoint, regular, junction
    for (const VoxelClass c : classify(s)) {
        if (c == VoxelClass::Endpoint) ++counts[0];
        if (c == VoxelClass::Regular) ++counts[1];
        if (c == VoxelClass::Junction) ++counts[2];
    }
    return counts;
}

} // namespace

TEST_CASE("thin: empty mask throws") {
    BinaryMask m({4, 4, 4}, {1, 1, 1});
    CHECK_THROWS_AS(thin(m), EmptyMask);
}

TEST_CASE("thin: 1-voxel-wide line is unchanged") {
    BinaryMask m({3, 3, 24}, {1, 1, 1});
    for (int k = 2; k < 22; ++k) m.set({1, 1, k});
    const Skeleton s = thin(m);
    CHECK(s.mask.membership == m.membership);
}

TEST_CASE("thin: solid cylinder reduces to a centered single path") {
    const int radius = 4, length = 40;
    const BinaryMask m = solid_cylinder(radius, length);
    const Skeleton s = thin(m);

    const auto counts = class_counts(s);
    CHECK(counts[0] == 2);   // two endpoints
    CHECK(counts[2] == 0);   // no junctions
    CHECK(count_components(s.mask, Connectivity::C26) == 1);

    // Every skeleton voxel within 1 voxel of the true axis.
    const int c = radius + 2;
    for (std::size_t p = 0; p < s.mask.grid.size(); ++p) {
        if (!s.mask.membership[p]) continue;
        const VoxelIndex v = s.mask.grid.unlin(p);
        const double off = std::hypot(v.i - c, v.j - c);
        REQUIRE(off <= 1.0 + 1e-12);
    }

    // Centering: skeleton hugs the medial axis (EDT >= r - 1.5).
    BinaryMask background(m.grid);
    for (std::size_t p = 0; p < m.grid.size(); ++p)
        background.membership[p] = m.membership[p] ? 0 : 1;
    const DistanceField edt = distance_transform(background, false);
    for (std::size_t p = 0; p < s.mask.grid.size(); ++p)
        if (s.mask.membership[p]) REQUIRE(edt.distance_um(p) >= radius - 1.5);
}

TEST_CASE("thin: Y phantom has 3 endpoints and one junction cluster") {
    PhantomSpec spec;
    spec.generations = 2;
    spec.root_diameter_um = 140.0;  // radius 3.5 voxels at 20 um
    spec.root_length_um = 700.0;
    spec.ratio1 = spec.ratio2 = 0.9;
    spec.angle1_deg = spec.angle2_deg = 40.0;
    const GroundTruth gt = generate(spec);
    const BinaryMask lumen = rasterize_lumen(gt, {96, 96, 96}, {20, 20, 20});
    const Skeleton s = thin(lumen);

    const auto counts = class_counts(s);
    CHECK(counts[0] == 3);
    CHECK(counts[2] >= 1);

    // Removing the junction cluster splits the skeleton into 3 components.
    BinaryMask without(s.mask.grid);
    const auto cls = classify(s);
    for (std::size_t p = 0; p < s.mask.grid.size(); ++p)
        without.membership[p] = s.mask.membership[p] && cls[p] != VoxelClass::Junction ? 1 : 0;
    CHECK(count_components(without, Connectivity::C26) == 3);
}

TEST_CASE("thin: invariants on random connected tube unions") {
    for (std::uint32_t seed = 0; seed < 20; ++seed) {
        const BinaryMask m = random_tube_union(seed);
        REQUIRE(m.count() > 0);
        const Skeleton s = thin(m);

        // Subset of the source mask.
        for (std::size_t p = 0; p < m.grid.size(); ++p)
            if (s.mask.membership[p]) REQUIRE(m.membership[p] == 1);

        // Topology preserved: 26-component count and Euler characteristic.
        REQUIRE(count_components(s.mask, Connectivity::C26) ==
                count_components(m, Connectivity::C26));
        REQUIRE(oracles::euler_characteristic(s.mask) == oracles::euler_characteristic(m));

        // Thin: no full 2x2x2 block.
        REQUIRE(!has_full_2x2x2_block(s.mask));

        // Idempotent.
        const Skeleton s2 = thin(s.mask);
        REQUIRE(s2.mask.membership == s.mask.membership);
    }
}

TEST_CASE("classify: straight path and isolated voxel") {
    BinaryMask m({3, 3, 7}, {1, 1, 1});
    for (int k = 1; k <= 5; ++k) m.set({1, 1, k});
    const auto counts = class_counts(Skeleton{m});
    CHECK(counts[0] == 2);
    CHECK(counts[1] == 3);
    CHECK(counts[2] == 0);

    BinaryMask single({3, 3, 3}, {1, 1, 1});
    single.set({1, 1, 1});
    CHECK(class_counts(Skeleton{single})[0] == 1);
}
