#include <doctest.h>

#include <cmath>
#include <random>

#include "vasc/distance.hpp"
#include "vasc/parallel.hpp"
#include "oracles.hpp"

using namespace vasc;

namespace {

BinaryMask random_mask(Dims dims, Spacing sp, double density, std::uint32_t seed) {
    BinaryMask m(dims, sp);
    std::mt19937 rng(seed);
    std::bernoulli_distribution coin(density);
    bool any = false;
    for (auto& v : m.membership) {
        v = coin(rng) ? 1 : 0;
        any = any || v;
    }
    if (!any) m.membership[rng() % m.membership.size()] = 1;
    return m;
}

} // namespace

TEST_CASE("distance_transform: point source in a 5^3 grid") {
    BinaryMask m({5, 5, 5}, {1, 1, 1});
    m.set({2, 2, 2});
    const DistanceField f = distance_transform(m);
    CHECK(f.distance_um({2, 2, 2}) == 0.0);
    CHECK(f.distance_um({0, 0, 0}) == doctest::Approx(std::sqrt(12.0)).epsilon(1e-12));
    CHECK(f.dist2[m.grid.lin(0, 0, 0)] == 12.0);
    CHECK(f.nearest[m.grid.lin(0, 0, 0)] == std::int64_t(m.grid.lin(2, 2, 2)));
}

TEST_CASE("distance_transform: saturated feature set is all zero") {
    BinaryMask m({4, 4, 4}, {1, 1, 1}, true);
    const DistanceField f = distance_transform(m);
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        CHECK(f.dist2[p] == 0.0);
        CHECK(f.nearest[p] == std::int64_t(p));
    }
}

TEST_CASE("distance_transform: empty feature set throws") {
    BinaryMask m({4, 4, 4}, {1, 1, 1});
    CHECK_THROWS_AS(distance_transform(m), EmptyFeatureSet);
}

TEST_CASE("distance_transform: 20 um isotropic spacing scales distances") {
    BinaryMask m({5, 5, 5}, {20, 20, 20});
    m.set({2, 2, 2});
    const DistanceField f = distance_transform(m);
    CHECK(f.distance_um({3, 2, 2}) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("distance_transform: squared distances and tie-broken nearest match brute force") {
    for (std::uint32_t seed = 0; seed < 30; ++seed) {
        const double density = 0.002 + 0.02 * (seed % 7);
        const BinaryMask m = random_mask({16, 16, 16}, {1, 1, 1}, density, seed);
        const DistanceField f = distance_transform(m);
        const auto oracle = oracles::brute_force_edt(m);
        for (std::size_t p = 0; p < m.grid.size(); ++p) {
            REQUIRE(f.dist2[p] == oracle.dist2[p]);  // bit identical
            REQUIRE(f.nearest[p] == oracle.nearest[p]);
        }
    }
}

TEST_CASE("distance_transform: anisotropic spacing matches brute force") {
    for (std::uint32_t seed = 100; seed < 110; ++seed) {
        const BinaryMask m = random_mask({9, 8, 7}, {1.0, 2.5, 3.25}, 0.05, seed);
        const DistanceField f = distance_transform(m);
        const auto oracle = oracles::brute_force_edt(m);
        for (std::size_t p = 0; p < m.grid.size(); ++p)
            REQUIRE(f.dist2[p] == doctest::Approx(oracle.dist2[p]).epsilon(1e-12));
    }
}

TEST_CASE("distance_transform: 1-Lipschitz on random voxel pairs") {
    const BinaryMask m = random_mask({12, 12, 12}, {2, 3, 4}, 0.01, 7);
    const DistanceField f = distance_transform(m);
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> u(0, 11);
    for (int t = 0; t < 2000; ++t) {
        const VoxelIndex a{u(rng), u(rng), u(rng)};
        const VoxelIndex b{u(rng), u(rng), u(rng)};
        const double lhs = std::abs(f.distance_um(a) - f.distance_um(b));
        CHECK(lhs <= m.grid.metric(a, b) + 1e-9);
    }
}

TEST_CASE("distance_transform: nearest channel attains the distance") {
    const BinaryMask m = random_mask({10, 14, 9}, {1, 1, 1}, 0.02, 21);
    const DistanceField f = distance_transform(m);
    for (std::size_t p = 0; p < m.grid.size(); ++p) {
        const std::size_t q = std::size_t(f.nearest[p]);
        REQUIRE(m.membership[q] == 1);
        const double d = m.grid.metric(m.grid.unlin(p), m.grid.unlin(q));
        REQUIRE(d * d == doctest::Approx(f.dist2[p]).epsilon(1e-12));
    }
}

TEST_CASE("distance_transform: output independent of thread count") {
    const BinaryMask m = random_mask({24, 20, 18}, {1, 1, 1}, 0.01, 3);
    set_thread_count(1);
    const DistanceField f1 = distance_transform(m);
    set_thread_count(8);
    const DistanceField f8 = distance_transform(m);
    set_thread_count(0);
    CHECK(f1.dist2 == f8.dist2);
    CHECK(f1.nearest == f8.nearest);
}
