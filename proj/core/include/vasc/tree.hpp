#ifndef VASC_TREE_HPP
#define VASC_TREE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "vasc/distance.hpp"
#include "vasc/skeleton.hpp"
#include "vasc/volume.hpp"

namespace vasc {

/// Skeleton decomposed into nodes (junction clusters and endpoints) and edges
/// (maximal chains of regular voxels). Every skeleton voxel belongs to exactly
/// one node cluster or one edge path.
struct GraphNode {
    std::vector<std::size_t> voxels;  // cluster member linear indices, ascending
    std::size_t rep = 0;              // lowest linear index in the cluster
    bool is_endpoint = false;
};

struct GraphEdge {
    int a = -1, b = -1;               // node ids
    std::size_t a_attach = 0;          // cluster voxel the path leaves from
    std::size_t b_attach = 0;          // cluster voxel the path arrives at
    std::vector<std::size_t> path;     // interior regular voxels, ordered a -> b
};

struct CenterlineGraph {
    Grid grid;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
};

/// One inter-branch segment: the vessel portion between consecutive
/// bifurcations (or a bifurcation and a tip).
struct Segment {
    int id = 0;
    int parent = -1;                 // -1 for the root segment
    std::vector<VoxelIndex> path;    // centerline polyline, parent side first
    double length_um = 0.0;
    double diameter_um = 0.0;
    int generation = 1;              // root = 1
};

struct VesselTree {
    Grid grid;
    std::vector<Segment> segments;   // ids are indices; breadth-first order
    int root = 0;
    std::vector<int> broken_cycle_edges;  // graph edge ids removed to break cycles

    std::vector<std::vector<int>> children() const;
};

struct GenerationStats {
    struct Row {
        int generation = 1;
        std::size_t count = 0;
        double diam_mean_um = 0.0, diam_std_um = 0.0;
        double len_mean_um = 0.0, len_std_um = 0.0;
    };
    std::vector<Row> rows;  // ascending generation
};

/// N(d) = number of segments with diameter strictly greater than d, sampled at
/// every distinct segment diameter (ascending d, non-increasing N).
struct CumulativeDistribution {
    std::vector<double> diameter_um;
    std::vector<std::size_t> count;
};

struct PowerLawFit {
    double gamma = 0.0;
    double r2 = 0.0;
    double dmin_um = 0.0, dmax_um = 0.0;  // window actually used
    std::size_t points = 0;
};

struct MurrayRecord {
    int node_id = 0;  // id of the parent segment at the bifurcation
    double d_parent_um = 0.0, d_child1_um = 0.0, d_child2_um = 0.0;
    double k = 0.0;
    bool defined = false;
};

CenterlineGraph build_graph(const Skeleton& skel);

/// Roots the graph at the endpoint node nearest root_hint and orients it
/// breadth-first. Cycles are broken by dropping each cycle's edge of minimum
/// mean-EDT radius (maximum spanning tree); dropped edge ids are recorded.
/// Without an EDT, path voxel count stands in as the radius proxy.
VesselTree root_tree(const CenterlineGraph& graph, VoxelIndex root_hint,
                     const DistanceField* edt = nullptr);

/// Length (polyline arc length) and diameter (2x trimmed-mean EDT over the
/// middle of the path; each end trimmed by min(25% of the voxels, the local
/// junction radius)) for every segment.
VesselTree measure(const VesselTree& tree, const DistanceField& edt);

/// Repeatedly removes terminal segments shorter than factor times the EDT
/// radius at their attachment, merging any single-child chains left behind
/// (merged segments are remeasured). The root is never removed.
VesselTree prune(const VesselTree& tree, const DistanceField& edt, double factor = 1.0);

GenerationStats generation_stats(const VesselTree& tree);

CumulativeDistribution cumulative_distribution(const VesselTree& tree);

/// OLS of log N on log d. Without an explicit window the "intermediary region"
/// heuristic applies: drop the 3 largest distinct diameters and any diameter
/// whose count exceeds 90% of the total segment count.
PowerLawFit fit_power_law(const CumulativeDistribution& dist,
                          std::optional<std::pair<double, double>> window = std::nullopt);

/// Solves d_p^k = d_1^k + d_2^k by bisection on (0, 10] to 1e-9. Bifurcations
/// with max(d_1, d_2) >= d_p (or no root in range) come back undefined.
double murray_exponent(double d_parent, double d_child1, double d_child2, bool& defined);

/// One record per node with exactly two children.
std::vector<MurrayRecord> murray_exponents(const VesselTree& tree);

} // namespace vasc

#endif
