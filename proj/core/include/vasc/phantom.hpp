#ifndef VASC_PHANTOM_HPP
#define VASC_PHANTOM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "vasc/volume.hpp"

namespace vasc {

/// Analytic full-binary vascular phantom. Deterministic for a fixed seed.
struct PhantomSpec {
    int generations = 4;
    double root_diameter_um = 200.0;
    double root_length_um = 1200.0;
    double ratio1 = 0.7937;      // child 1 diameter ratio (Murray: 2^{-1/3})
    double ratio2 = 0.7937;      // child 2 diameter ratio
    double length_ratio = 0.72;  // child length / parent length
    double angle1_deg = 32.0;    // branching half-angle, child 1
    double angle2_deg = 32.0;    // branching half-angle, child 2
    std::uint64_t seed = 0;      // rng seed for jitter
    double jitter = 0.0;         // relative jitter on lengths/diameters/angles, 0 = off
};

struct TruthSegment {
    int id = 0;
    int parent = -1;  // -1 for the root
    std::array<double, 3> p0{}, p1{};  // axis endpoints, µm
    double diameter_um = 0.0;
    double length_um = 0.0;
    int generation = 1;  // root = 1
};

struct GroundTruth {
    PhantomSpec spec;
    std::vector<TruthSegment> segments;

    /// ln 2 / ln(1/r) for symmetric specs (NaN when ratio1 != ratio2).
    double expected_gamma() const;
};

/// Deterministic analytic binary tree; branch planes rotate out of plane each
/// generation. Throws InvalidSpec for bad parameters and SelfIntersection when
/// non-adjacent segments come closer than the sum of their radii.
GroundTruth generate(const PhantomSpec& spec);

/// World placement of a rasterized phantom: voxel (i,j,k) center sits at
/// origin_um + (i*sx, j*sy, k*sz). The tree bounding box expanded by the
/// margin is centered in the grid extent.
struct RasterInfo {
    std::array<double, 3> origin_um{};
};

RasterInfo raster_info(const GroundTruth& gt, Dims dims, Spacing spacing, double margin_um);

/// Lumen voxel set of the tree: voxel centers inside any segment capsule
/// (cylinder plus hemispherical caps). Throws TreeOutOfBounds when the tree
/// (plus margin) does not fit the grid.
BinaryMask rasterize_lumen(const GroundTruth& gt, Dims dims, Spacing spacing,
                           double margin_um = 0.0);

/// Gray-scale phantom volume: lumen 6000, tissue envelope (bounding box
/// expanded by the margin, minus lumen) 900, background 0.
Volume3D rasterize(const GroundTruth& gt, Dims dims, Spacing spacing,
                   double tissue_margin_um = 100.0);

/// Deterministic lumen voxel near the root inlet, for seeding segmentation of
/// a rasterized phantom.
VoxelIndex root_seed(const GroundTruth& gt, const RasterInfo& info, const BinaryMask& lumen);

} // namespace vasc

#endif
