#include "vasc/volume.hpp"

#include <algorithm>
#include <cmath>

namespace vasc {

double Grid::metric(const VoxelIndex& a, const VoxelIndex& b) const {
    const double dx = (a.i - b.i) * spacing[0];
    const double dy = (a.j - b.j) * spacing[1];
    const double dz = (a.k - b.k) * spacing[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::size_t BinaryMask::count() const {
    return std::size_t(std::count(membership.begin(), membership.end(), std::uint8_t(1)));
}

namespace {

std::vector<std::array<int, 3>> make_offsets(int conn) {
    std::vector<std::array<int, 3>> out;
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int nz = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (nz == 0) continue;
                if (conn == 6 && nz > 1) continue;
                if (conn == 18 && nz > 2) continue;
                out.push_back({dx, dy, dz});
            }
    return out;
}

} // namespace

const std::vector<std::array<int, 3>>& neighbor_offsets(Connectivity conn) {
    static const std::vector<std::array<int, 3>> o6 = make_offsets(6);
    static const std::vector<std::array<int, 3>> o18 = make_offsets(18);
    static const std::vector<std::array<int, 3>> o26 = make_offsets(26);
    switch (conn) {
        case Connectivity::C6: return o6;
        case Connectivity::C18: return o18;
        default: return o26;
    }
}

std::vector<VoxelIndex> neighbors(const VoxelIndex& idx, const Dims& dims, Connectivity conn) {
    if (idx.i < 0 || idx.i >= dims[0] || idx.j < 0 || idx.j >= dims[1] || idx.k < 0 ||
        idx.k >= dims[2])
        throw BoundsError("neighbors: index out of bounds");
    std::vector<VoxelIndex> out;
    out.reserve(static_cast<std::size_t>(static_cast<int>(conn)));
    for (const auto& d : neighbor_offsets(conn)) {
        const VoxelIndex n{idx.i + d[0], idx.j + d[1], idx.k + d[2]};
        if (n.i >= 0 && n.i < dims[0] && n.j >= 0 && n.j < dims[1] && n.k >= 0 && n.k < dims[2])
            out.push_back(n);
    }
    return out;
}

} // namespace vasc
