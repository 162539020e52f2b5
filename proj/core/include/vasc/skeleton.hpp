#ifndef VASC_SKELETON_HPP
#define VASC_SKELETON_HPP

#include <cstdint>
#include <vector>

#include "vasc/volume.hpp"

namespace vasc {

/// 1-voxel-wide centerline of a binary mask. Subset of the source mask with
/// the same 26-connected component count.
struct Skeleton {
    BinaryMask mask;
};

enum class VoxelClass : std::uint8_t { Background = 0, Endpoint = 1, Regular = 2, Junction = 3 };

/// Topology-preserving thinning: iteratively removes simple points
/// (26-connected foreground / 6-connected background) in six fixed
/// directional sub-iterations until stable. Within a sub-iteration,
/// candidates are taken from the pre-pass state, ordered by distance to the
/// background (then linear index) and re-checked at removal time, so the
/// result is deterministic and centered on the medial axis. Voxels with at
/// most one foreground 26-neighbor are never removed.
/// Throws EmptyMask.
Skeleton thin(const BinaryMask& mask);

/// Classify each skeleton voxel by its 26-neighbor count within the skeleton:
/// <=1 -> Endpoint, 2 -> Regular, >=3 -> Junction. Background elsewhere.
std::vector<VoxelClass> classify(const Skeleton& skel);

/// True when removing the voxel at `lin` keeps local topology unchanged
/// (exactly one adjacent foreground 26-component and one adjacent background
/// 6-component in the 18-neighborhood). Out-of-bounds counts as background.
bool is_simple_point(const BinaryMask& mask, std::size_t lin);

} // namespace vasc

#endif
