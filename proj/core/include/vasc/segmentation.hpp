#ifndef VASC_SEGMENTATION_HPP
#define VASC_SEGMENTATION_HPP

#include <cstddef>
#include <limits>

#include "vasc/volume.hpp"

namespace vasc {

/// Seeded region-growing parameters. Thresholds are in the volume's native
/// gray-scale units (attenuation, [1000/cm], for micro-CT inputs).
struct GrowParams {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    VoxelIndex seed{};
    Connectivity conn = Connectivity::C26;
};

/// Vessel preset: lo 1500, unbounded above, 26-connected.
GrowParams vessel_preset(VoxelIndex seed);

/// Tissue preset: [600, 1200], 6-connected.
GrowParams tissue_preset(VoxelIndex seed);

/// The conn-connected component of {v : lo <= vol(v) <= hi} containing the
/// seed. Iterative worklist; output independent of traversal order.
/// Throws SeedOutsideRange / BoundsError.
BinaryMask region_grow(const Volume3D& vol, const GrowParams& p);

/// Number of conn-connected components of true voxels.
std::size_t count_components(const BinaryMask& mask, Connectivity conn);

} // namespace vasc

#endif
