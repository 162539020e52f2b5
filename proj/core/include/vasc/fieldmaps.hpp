#ifndef VASC_FIELDMAPS_HPP
#define VASC_FIELDMAPS_HPP

#include <vector>

#include "vasc/skeleton.hpp"
#include "vasc/volume.hpp"

namespace vasc {

/// Out-of-mask voxels in the scalar map volumes carry this sentinel.
constexpr float kMapSentinel = -1.0f;

struct PerfusionHistogram {
    double bin_width_um = 20.0;
    std::vector<double> bin_edges_um;  // size counts.size() + 1, starting at 0
    std::vector<std::size_t> counts;
    std::vector<double> freq;          // counts normalized to sum 1
};

struct SpecimenAggregate {
    double bin_width_um = 20.0;
    std::vector<double> bin_edges_um;
    std::vector<double> mean_freq;
    std::vector<double> std_freq;  // (n-1) std; 0 for a single specimen
    std::size_t specimens = 0;
};

/// Distance (µm) from each vessel voxel to its nearest skeleton voxel;
/// sentinel elsewhere. Throws EmptyFeatureSet for an empty skeleton.
Volume3D local_diameter_map(const BinaryMask& vessel, const Skeleton& skel);

/// Distance (µm) from each tissue voxel to its nearest vessel voxel; sentinel
/// elsewhere. Throws EmptyFeatureSet for an empty vessel mask, GridMismatch
/// when the masks disagree on the grid.
Volume3D perfusion_map(const BinaryMask& tissue, const BinaryMask& vessel);

/// Histogram of the non-sentinel values of a map volume; left-closed
/// right-open bins starting at 0. Throws InvalidParameter for bin_width <= 0.
PerfusionHistogram perfusion_histogram(const Volume3D& map, double bin_width_um = 20.0);

/// Per-bin mean and (n-1) std of normalized frequencies across specimens.
/// Histograms must share a bin grid; shorter ones are zero-padded to the
/// longest. Throws GridMismatch on differing bin widths, InvalidParameter on
/// empty input.
SpecimenAggregate aggregate_specimens(const std::vector<PerfusionHistogram>& histograms);

} // namespace vasc

#endif
