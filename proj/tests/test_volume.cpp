#include <doctest.h>

#include <cstdlib>

#include "vasc/volume.hpp"

using namespace vasc;

TEST_CASE("neighbors: full interior under 6-connectivity") {
    const Dims dims{3, 3, 3};
    CHECK(neighbors({1, 1, 1}, dims, Connectivity::C6).size() == 6);
    CHECK(neighbors({1, 1, 1}, dims, Connectivity::C18).size() == 18);
    CHECK(neighbors({1, 1, 1}, dims, Connectivity::C26).size() == 26);
}

TEST_CASE("neighbors: corner clipping") {
    const Dims dims{3, 3, 3};
    CHECK(neighbors({0, 0, 0}, dims, Connectivity::C26).size() == 7);
    CHECK(neighbors({0, 0, 0}, dims, Connectivity::C6).size() == 3);
}

TEST_CASE("neighbors: out-of-bounds index throws") {
    const Dims dims{3, 3, 3};
    CHECK_THROWS_AS(neighbors({3, 0, 0}, dims, Connectivity::C6), BoundsError);
    CHECK_THROWS_AS(neighbors({0, -1, 0}, dims, Connectivity::C26), BoundsError);
}

TEST_CASE("neighbors: 18-connectivity matches offset enumeration on an 8^3 grid") {
    const Dims dims{8, 8, 8};
    for (int k = 0; k < 8; ++k)
        for (int j = 0; j < 8; ++j)
            for (int i = 0; i < 8; ++i) {
                const auto got = neighbors({i, j, k}, dims, Connectivity::C18);
                // Oracle: offsets with at most 2 nonzero components of magnitude 1.
                std::size_t expect = 0;
                for (int dz = -1; dz <= 1; ++dz)
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int nz = std::abs(dx) + std::abs(dy) + std::abs(dz);
                            if (nz == 0 || nz > 2) continue;
                            const int x = i + dx, y = j + dy, z = k + dz;
                            if (x >= 0 && x < 8 && y >= 0 && y < 8 && z >= 0 && z < 8) ++expect;
                        }
                REQUIRE(got.size() == expect);
                for (std::size_t a = 0; a < got.size(); ++a)
                    for (std::size_t b = a + 1; b < got.size(); ++b)
                        REQUIRE(!(got[a] == got[b]));  // no duplicates
            }
}

TEST_CASE("grid: linear index round trip, x fastest") {
    const Grid g({4, 5, 6}, {1, 1, 1});
    CHECK(g.lin(1, 0, 0) == 1);
    CHECK(g.lin(0, 1, 0) == 4);
    CHECK(g.lin(0, 0, 1) == 20);
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(g.lin(g.unlin(n)) == n);
}

TEST_CASE("grid: invalid dims and spacing rejected") {
    CHECK_THROWS_AS(Grid({0, 4, 4}, {1, 1, 1}), InvalidParameter);
    CHECK_THROWS_AS(Grid({4, 4, 4}, {1, 0, 1}), InvalidParameter);
}
