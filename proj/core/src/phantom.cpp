#include "vasc/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vasc/errors.hpp"
#include "vasc/parallel.hpp"

namespace vasc {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 normalized(const Vec3& a) { return scale(a, 1.0 / norm(a)); }

// Squared distance from point p to segment [a, b].
double point_segment_dist2(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = sub(b, a);
    const double len2 = dot(ab, ab);
    double t = len2 > 0 ? dot(sub(p, a), ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec3 c = add(a, scale(ab, t));
    return dot(sub(p, c), sub(p, c));
}

// Minimum distance between two 3D segments (sampled + refined endpoints; used
// only for the self-intersection check, exactness not required).
double segment_segment_dist(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    double best = std::numeric_limits<double>::infinity();
    constexpr int N = 32;
    for (int i = 0; i <= N; ++i) {
        const Vec3 p = add(a0, scale(sub(a1, a0), double(i) / N));
        best = std::min(best, point_segment_dist2(p, b0, b1));
    }
    for (int i = 0; i <= N; ++i) {
        const Vec3 p = add(b0, scale(sub(b1, b0), double(i) / N));
        best = std::min(best, point_segment_dist2(p, a0, a1));
    }
    return std::sqrt(best);
}

bool share_endpoint(const TruthSegment& a, const TruthSegment& b) {
    const double eps = 1e-6;
    for (const Vec3* pa : {&a.p0, &a.p1})
        for (const Vec3* pb : {&b.p0, &b.p1})
            if (norm(sub(*pa, *pb)) < eps) return true;
    return false;
}

struct Frame {
    Vec3 dir;     // segment direction
    Vec3 normal;  // branching-plane normal
};

} // namespace

double GroundTruth::expected_gamma() const {
    if (spec.ratio1 != spec.ratio2) return std::numeric_limits<double>::quiet_NaN();
    return std::log(2.0) / std::log(1.0 / spec.ratio1);
}

GroundTruth generate(const PhantomSpec& spec) {
    if (spec.generations < 1) throw InvalidSpec("generations must be >= 1");
    if (spec.root_diameter_um <= 0 || spec.root_length_um <= 0)
        throw InvalidSpec("root diameter and length must be positive");
    if (spec.ratio1 <= 0 || spec.ratio1 >= 1 || spec.ratio2 <= 0 || spec.ratio2 >= 1)
        throw InvalidSpec("diameter ratios must lie in (0, 1)");
    if (spec.length_ratio <= 0) throw InvalidSpec("length ratio must be positive");
    if (spec.jitter < 0 || spec.jitter >= 0.5) throw InvalidSpec("jitter must lie in [0, 0.5)");

    std::mt19937_64 rng(spec.seed);
    auto jit = [&](double v) {
        if (spec.jitter == 0) return v;
        std::uniform_real_distribution<double> u(-spec.jitter, spec.jitter);
        return v * (1.0 + u(rng));
    };

    GroundTruth gt;
    gt.spec = spec;

    std::vector<Frame> frames;
    TruthSegment root;
    root.id = 0;
    root.parent = -1;
    root.generation = 1;
    root.p0 = {0, 0, 0};
    root.length_um = jit(spec.root_length_um);
    root.diameter_um = jit(spec.root_diameter_um);
    root.p1 = {0, 0, root.length_um};
    gt.segments.push_back(root);
    frames.push_back({{0, 0, 1}, {1, 0, 0}});

    // Breadth-first expansion keeps ids and rng draws in a fixed order.
    for (std::size_t s = 0; s < gt.segments.size(); ++s) {
        const TruthSegment parent = gt.segments[s];
        if (parent.generation >= spec.generations) continue;
        const Frame fr = frames[s];
        const Vec3 w = normalized(cross(fr.normal, fr.dir));
        const Vec3 child_normal = normalized(cross(fr.dir, fr.normal));
        const double angles[2] = {spec.angle1_deg, -spec.angle2_deg};
        const double ratios[2] = {spec.ratio1, spec.ratio2};
        for (int c = 0; c < 2; ++c) {
            const double theta = jit(angles[c]) * M_PI / 180.0;
            const Vec3 dir = normalized(add(scale(fr.dir, std::cos(theta)),
                                            scale(w, std::sin(theta))));
            TruthSegment child;
            child.id = int(gt.segments.size());
            child.parent = parent.id;
            child.generation = parent.generation + 1;
            child.length_um = jit(parent.length_um * spec.length_ratio);
            child.diameter_um = jit(parent.diameter_um * ratios[c]);
            child.p0 = parent.p1;
            child.p1 = add(parent.p1, scale(dir, child.length_um));
            gt.segments.push_back(child);
            frames.push_back({dir, child_normal});
        }
    }

    // Non-adjacent capsules must stay apart by at least the sum of radii.
    for (std::size_t a = 0; a < gt.segments.size(); ++a)
        for (std::size_t b = a + 1; b < gt.segments.size(); ++b) {
            const TruthSegment& sa = gt.segments[a];
            const TruthSegment& sb = gt.segments[b];
            if (share_endpoint(sa, sb)) continue;
            const double d = segment_segment_dist(sa.p0, sa.p1, sb.p0, sb.p1);
            if (d < (sa.diameter_um + sb.diameter_um) / 2.0)
                throw SelfIntersection("phantom segments " + std::to_string(sa.id) + " and " +
                                       std::to_string(sb.id) + " intersect");
        }
    return gt;
}

namespace {

struct Bounds {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
};

Bounds capsule_bounds(const GroundTruth& gt, double margin_um) {
    Bounds b;
    for (const auto& s : gt.segments) {
        const double r = s.diameter_um / 2.0 + margin_um;
        for (int a = 0; a < 3; ++a) {
            b.lo[a] = std::min({b.lo[a], s.p0[a] - r, s.p1[a] - r});
            b.hi[a] = std::max({b.hi[a], s.p0[a] + r, s.p1[a] + r});
        }
    }
    return b;
}

} // namespace

RasterInfo raster_info(const GroundTruth& gt, Dims dims, Spacing spacing, double margin_um) {
    const Bounds b = capsule_bounds(gt, margin_um);
    RasterInfo info;
    for (int a = 0; a < 3; ++a) {
        const double extent = (dims[a] - 1) * spacing[a];  // first to last voxel center
        const double need = b.hi[a] - b.lo[a];
        if (need > extent + spacing[a])
            throw TreeOutOfBounds("phantom extent " + std::to_string(need) +
                                  " um exceeds grid axis " + std::to_string(a));
        info.origin_um[a] = b.lo[a] - (extent - need) / 2.0;
    }
    return info;
}

BinaryMask rasterize_lumen(const GroundTruth& gt, Dims dims, Spacing spacing, double margin_um) {
    const RasterInfo info = raster_info(gt, dims, spacing, margin_um);
    BinaryMask lumen(dims, spacing);
    const Grid& g = lumen.grid;
    for (const auto& s : gt.segments) {
        const double r = s.diameter_um / 2.0;
        int lo[3], hi[3];
        for (int a = 0; a < 3; ++a) {
            const double wlo = std::min(s.p0[a], s.p1[a]) - r;
            const double whi = std::max(s.p0[a], s.p1[a]) + r;
            lo[a] = std::max(0, int(std::floor((wlo - info.origin_um[a]) / spacing[a])));
            hi[a] = std::min(dims[a] - 1, int(std::ceil((whi - info.origin_um[a]) / spacing[a])));
        }
        const double r2 = r * r;
        for (int k = lo[2]; k <= hi[2]; ++k)
            for (int j = lo[1]; j <= hi[1]; ++j)
                for (int i = lo[0]; i <= hi[0]; ++i) {
                    const Vec3 p{info.origin_um[0] + i * spacing[0],
                                 info.origin_um[1] + j * spacing[1],
                                 info.origin_um[2] + k * spacing[2]};
                    if (point_segment_dist2(p, s.p0, s.p1) <= r2)
                        lumen.membership[g.lin(i, j, k)] = 1;
                }
    }
    return lumen;
}

Volume3D rasterize(const GroundTruth& gt, Dims dims, Spacing spacing, double tissue_margin_um) {
    const RasterInfo info = raster_info(gt, dims, spacing, tissue_margin_um);
    Volume3D vol(dims, spacing, 0.0f);
    const Grid& g = vol.grid;

    // Tissue envelope: bounding box of the tree expanded by the margin.
    const Bounds tb = capsule_bounds(gt, tissue_margin_um);
    int tlo[3], thi[3];
    for (int a = 0; a < 3; ++a) {
        tlo[a] = std::max(0, int(std::ceil((tb.lo[a] - info.origin_um[a]) / spacing[a])));
        thi[a] = std::min(dims[a] - 1, int(std::floor((tb.hi[a] - info.origin_um[a]) / spacing[a])));
    }
    for (int k = tlo[2]; k <= thi[2]; ++k)
        for (int j = tlo[1]; j <= thi[1]; ++j)
            for (int i = tlo[0]; i <= thi[0]; ++i) vol.values[g.lin(i, j, k)] = 900.0f;

    for (const auto& s : gt.segments) {
        const double r = s.diameter_um / 2.0;
        int lo[3], hi[3];
        for (int a = 0; a < 3; ++a) {
            const double wlo = std::min(s.p0[a], s.p1[a]) - r;
            const double whi = std::max(s.p0[a], s.p1[a]) + r;
            lo[a] = std::max(0, int(std::floor((wlo - info.origin_um[a]) / spacing[a])));
            hi[a] = std::min(dims[a] - 1, int(std::ceil((whi - info.origin_um[a]) / spacing[a])));
        }
        const double r2 = r * r;
        for (int k = lo[2]; k <= hi[2]; ++k)
            for (int j = lo[1]; j <= hi[1]; ++j)
                for (int i = lo[0]; i <= hi[0]; ++i) {
                    const Vec3 p{info.origin_um[0] + i * spacing[0],
                                 info.origin_um[1] + j * spacing[1],
                                 info.origin_um[2] + k * spacing[2]};
                    if (point_segment_dist2(p, s.p0, s.p1) <= r2)
                        vol.values[g.lin(i, j, k)] = 6000.0f;
                }
    }
    return vol;
}

VoxelIndex root_seed(const GroundTruth& gt, const RasterInfo& info, const BinaryMask& lumen) {
    const TruthSegment& root = gt.segments.front();
    const Vec3 dir = normalized(sub(root.p1, root.p0));
    const Vec3 p = add(root.p0, scale(dir, root.diameter_um / 2.0));
    const Grid& g = lumen.grid;
    VoxelIndex v{
        std::clamp(int(std::lround((p[0] - info.origin_um[0]) / g.spacing[0])), 0, g.dims[0] - 1),
        std::clamp(int(std::lround((p[1] - info.origin_um[1]) / g.spacing[1])), 0, g.dims[1] - 1),
        std::clamp(int(std::lround((p[2] - info.origin_um[2]) / g.spacing[2])), 0, g.dims[2] - 1)};
    if (lumen.test(v)) return v;
    // Fall back to the nearest lumen voxel (deterministic: lowest linear index
    // among co-nearest).
    double best = std::numeric_limits<double>::infinity();
    VoxelIndex bestv{};
    bool found = false;
    for (std::size_t n = 0; n < g.size(); ++n) {
        if (!lumen.membership[n]) continue;
        const VoxelIndex c = g.unlin(n);
        const double d = g.metric(c, v);
        if (d < best) {
            best = d;
            bestv = c;
            found = true;
        }
    }
    if (!found) throw EmptyMask("root_seed: lumen mask is empty");
    return bestv;
}

} // namespace vasc
