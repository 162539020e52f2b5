#ifndef VASC_DISTANCE_HPP
#define VASC_DISTANCE_HPP

#include <cstdint>
#include <vector>

#include "vasc/volume.hpp"

namespace vasc {

/// Per-voxel Euclidean distance to a feature set.
///
/// dist2 holds the exact squared anisotropic voxel-center distance in µm².
/// nearest (when computed) holds the linear index of an attaining feature
/// voxel; ties resolve to the lowest linear index.
struct DistanceField {
    Grid grid;
    std::vector<double> dist2;          // µm²
    std::vector<std::int64_t> nearest;  // empty when not requested

    double distance_um(std::size_t n) const;
    double distance_um(const VoxelIndex& v) const { return distance_um(grid.lin(v)); }
    bool has_nearest() const { return !nearest.empty(); }
};

/// Exact anisotropic squared-Euclidean distance transform (separable
/// lower-envelope passes, one per axis). With uniform spacing the squared
/// distances are computed in integer voxel units and scaled to µm² only at
/// output. Throws EmptyFeatureSet when the mask has no true voxel.
DistanceField distance_transform(const BinaryMask& feature, bool with_nearest = true);

} // namespace vasc

#endif
