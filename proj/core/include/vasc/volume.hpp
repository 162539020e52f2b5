#ifndef VASC_VOLUME_HPP
#define VASC_VOLUME_HPP

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "vasc/errors.hpp"

namespace vasc {

/// Integer voxel coordinate. Linear index order is x-fastest:
/// lin = i + nx*(j + ny*k).
struct VoxelIndex {
    int i = 0, j = 0, k = 0;

    friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
};

using Dims = std::array<int, 3>;
using Spacing = std::array<double, 3>; // micrometers per voxel

enum class Connectivity : int { C6 = 6, C18 = 18, C26 = 26 };

/// Common grid metadata shared by volumes, masks and fields.
struct Grid {
    Dims dims{1, 1, 1};
    Spacing spacing{1.0, 1.0, 1.0};

    Grid() = default;
    Grid(Dims d, Spacing s) : dims(d), spacing(s) {
        if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1)
            throw InvalidParameter("grid dims must be >= 1 in every axis");
        if (spacing[0] <= 0 || spacing[1] <= 0 || spacing[2] <= 0)
            throw InvalidParameter("grid spacing must be positive");
    }

    std::size_t size() const {
        return std::size_t(dims[0]) * std::size_t(dims[1]) * std::size_t(dims[2]);
    }
    bool in_bounds(const VoxelIndex& v) const {
        return v.i >= 0 && v.i < dims[0] && v.j >= 0 && v.j < dims[1] && v.k >= 0 && v.k < dims[2];
    }
    std::size_t lin(int i, int j, int k) const {
        return std::size_t(i) + std::size_t(dims[0]) * (std::size_t(j) + std::size_t(dims[1]) * std::size_t(k));
    }
    std::size_t lin(const VoxelIndex& v) const { return lin(v.i, v.j, v.k); }
    VoxelIndex unlin(std::size_t n) const {
        int i = int(n % std::size_t(dims[0]));
        n /= std::size_t(dims[0]);
        int j = int(n % std::size_t(dims[1]));
        int k = int(n / std::size_t(dims[1]));
        return {i, j, k};
    }
    /// Anisotropic voxel-center distance in micrometers.
    double metric(const VoxelIndex& a, const VoxelIndex& b) const;

    bool same_grid(const Grid& o) const { return dims == o.dims && spacing == o.spacing; }

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// Gray-scale scalar field on a regular anisotropic voxel grid.
/// Input volumes carry micro-CT attenuation; derived maps carry arbitrary scalars.
struct Volume3D {
    Grid grid;
    std::vector<float> values; // x-fastest

    Volume3D() = default;
    Volume3D(Dims d, Spacing s, float fill = 0.0f) : grid(d, s), values(grid.size(), fill) {}

    float at(const VoxelIndex& v) const { return values[grid.lin(v)]; }
    float& at(const VoxelIndex& v) { return values[grid.lin(v)]; }
};

/// Boolean field marking a segmented voxel set on the same grid as its source volume.
struct BinaryMask {
    Grid grid;
    std::vector<std::uint8_t> membership; // 0 or 1, x-fastest

    BinaryMask() = default;
    BinaryMask(Dims d, Spacing s, bool fill = false)
        : grid(d, s), membership(grid.size(), fill ? 1 : 0) {}
    explicit BinaryMask(Grid g, bool fill = false)
        : grid(g), membership(grid.size(), fill ? 1 : 0) {}

    bool test(const VoxelIndex& v) const { return membership[grid.lin(v)] != 0; }
    bool test(std::size_t n) const { return membership[n] != 0; }
    void set(const VoxelIndex& v, bool on = true) { membership[grid.lin(v)] = on ? 1 : 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
};

/// Neighbor offset table for one of the three standard 3D neighborhoods.
/// Offsets are in a fixed deterministic order (ascending linear offset).
const std::vector<std::array<int, 3>>& neighbor_offsets(Connectivity conn);

/// In-bounds neighbors of idx under conn. Throws BoundsError for out-of-bounds idx.
std::vector<VoxelIndex> neighbors(const VoxelIndex& idx, const Dims& dims, Connectivity conn);

} // namespace vasc

#endif
