#include "vasc/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vasc/errors.hpp"
#include "vasc/parallel.hpp"

namespace vasc {

double DistanceField::distance_um(std::size_t n) const { return std::sqrt(dist2[n]); }

namespace {

// First integer position where the parabola rooted at r strictly beats the one
// rooted at q (q < r). Both share the per-step weight w.
//   value(q, i) = f[q] + w*(i-q)^2
// They cross at s = (f[r]-f[q] + w*(r²-q²)) / (2w(r-q)); r wins for i > s,
// so ties at integer s go to the smaller root q.
int region_start(std::int64_t fq, int q, std::int64_t fr, int r, std::int64_t w) {
    const __int128 num =
        __int128(fr) - fq + __int128(w) * (__int128(r) * r - __int128(q) * q);
    const __int128 den = __int128(2) * w * (r - q);
    __int128 fl = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --fl;  // floor division
    return int(fl) + 1;
}

int region_start(double fq, int q, double fr, int r, double w) {
    const double s = (fr - fq + w * (double(r) * r - double(q) * q)) / (2.0 * w * (r - q));
    return int(std::floor(s)) + 1;
}

// 1D squared-distance transform along one line: d[i] = min_q f[q] + w*(i-q)²,
// arg[i] = attaining q (smallest on ties). Positions with f == inf are never
// sources; if no finite source exists d stays inf and arg stays -1.
template <class T>
void envelope_line(const T* f, int n, T w, T inf, T* d, int* arg) {
    // v: root positions of envelope parabolas; start[m]: first position where
    // parabola v[m] is the strict winner among v[0..m].
    static thread_local std::vector<int> v, start;
    v.clear();
    start.clear();
    for (int q = 0; q < n; ++q) {
        if (f[q] >= inf) continue;
        int s = 0;
        while (!v.empty()) {
            s = region_start(f[v.back()], v.back(), f[q], q, w);
            if (s <= start.back())
                { v.pop_back(); start.pop_back(); }
            else
                break;
        }
        if (v.empty()) s = 0;
        v.push_back(q);
        start.push_back(s);
    }
    if (v.empty()) {
        for (int i = 0; i < n; ++i) { d[i] = inf; arg[i] = -1; }
        return;
    }
    std::size_t m = 0;
    for (int i = 0; i < n; ++i) {
        while (m + 1 < v.size() && start[m + 1] <= i) ++m;
        const int q = v[m];
        const T dx = T(i - q);
        d[i] = f[q] + w * dx * dx;
        arg[i] = q;
    }
}

struct AxisInfo {
    int n;                 // voxels along the axis
    std::size_t stride;    // linear stride along the axis
    std::size_t lines;     // number of lines perpendicular to the axis
};

AxisInfo axis_info(const Grid& g, int axis) {
    const std::size_t nx = std::size_t(g.dims[0]), ny = std::size_t(g.dims[1]),
                      nz = std::size_t(g.dims[2]);
    switch (axis) {
        case 0: return {g.dims[0], 1, ny * nz};
        case 1: return {g.dims[1], nx, nx * nz};
        default: return {g.dims[2], nx * ny, nx * ny};
    }
}

// Linear index of the first voxel of the line'th grid line along axis.
std::size_t line_base(const Grid& g, int axis, std::size_t line) {
    const std::size_t nx = std::size_t(g.dims[0]), ny = std::size_t(g.dims[1]);
    switch (axis) {
        case 0: return line * nx;                                   // line = j + ny*k
        case 1: return (line % nx) + nx * ny * (line / nx);         // line = i + nx*k
        default: return line;                                       // line = i + nx*j
    }
}

// One separable pass along `axis`. near[3] are the per-axis nearest-feature
// coordinate channels; channels for axes already processed are re-gathered
// through this pass's argmin, and this axis's channel is written.
template <class T>
void edt_pass(const Grid& g, int axis, T w, T inf, std::vector<T>& d,
              std::array<std::vector<int>, 3>* near, int pass_index) {
    const AxisInfo ax = axis_info(g, axis);
    parallel_for(0, ax.lines, [&](std::size_t line) {
        std::vector<T> f(ax.n), dd(ax.n);
        std::vector<int> arg(ax.n);
        const std::size_t base = line_base(g, axis, line);
        for (int t = 0; t < ax.n; ++t) f[t] = d[base + std::size_t(t) * ax.stride];
        envelope_line(f.data(), ax.n, w, inf, dd.data(), arg.data());
        for (int t = 0; t < ax.n; ++t) d[base + std::size_t(t) * ax.stride] = dd[t];
        if (near) {
            std::vector<int> prev;
            for (int a = 0; a < pass_index; ++a) {
                const int chan = a;  // axes are processed in order 0,1,2
                auto& ch = (*near)[chan];
                prev.resize(std::size_t(ax.n));
                for (int t = 0; t < ax.n; ++t) prev[std::size_t(t)] = ch[base + std::size_t(t) * ax.stride];
                for (int t = 0; t < ax.n; ++t)
                    ch[base + std::size_t(t) * ax.stride] = arg[t] < 0 ? -1 : prev[std::size_t(arg[t])];
            }
            auto& own = (*near)[axis];
            for (int t = 0; t < ax.n; ++t) own[base + std::size_t(t) * ax.stride] = arg[t];
        }
    });
}

template <class T>
void run_passes(const Grid& g, const std::array<T, 3>& weights, T inf, std::vector<T>& d,
                std::array<std::vector<int>, 3>* near) {
    for (int axis = 0; axis < 3; ++axis) edt_pass(g, axis, weights[axis], inf, d, near, axis);
}

} // namespace

DistanceField distance_transform(const BinaryMask& feature, bool with_nearest) {
    if (feature.count() == 0) throw EmptyFeatureSet();
    const Grid& g = feature.grid;
    const std::size_t n = g.size();

    DistanceField out;
    out.grid = g;
    out.dist2.resize(n);

    std::array<std::vector<int>, 3> near;
    std::array<std::vector<int>, 3>* nearp = nullptr;
    if (with_nearest) {
        for (auto& ch : near) ch.assign(n, -1);
        nearp = &near;
    }

    const bool uniform = g.spacing[0] == g.spacing[1] && g.spacing[1] == g.spacing[2];
    if (uniform) {
        // Integer voxel units; scaled to µm² only at the end.
        const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
        std::vector<std::int64_t> d(n);
        for (std::size_t p = 0; p < n; ++p) d[p] = feature.membership[p] ? 0 : inf;
        run_passes<std::int64_t>(g, {1, 1, 1}, inf, d, nearp);
        const double s2 = g.spacing[0] * g.spacing[0];
        parallel_for(0, n, [&](std::size_t p) { out.dist2[p] = double(d[p]) * s2; });
    } else {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> d(n);
        for (std::size_t p = 0; p < n; ++p) d[p] = feature.membership[p] ? 0.0 : inf;
        const std::array<double, 3> w{g.spacing[0] * g.spacing[0], g.spacing[1] * g.spacing[1],
                                      g.spacing[2] * g.spacing[2]};
        run_passes<double>(g, w, inf, d, nearp);
        out.dist2 = std::move(d);
    }

    if (with_nearest) {
        out.nearest.resize(n);
        parallel_for(0, n, [&](std::size_t p) {
            out.nearest[p] = g.lin(near[0][p], near[1][p], near[2][p]);
        });
    }
    return out;
}

} // namespace vasc
