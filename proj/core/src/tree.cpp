#include "vasc/tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "vasc/errors.hpp"

namespace vasc {

std::vector<std::vector<int>> VesselTree::children() const {
    std::vector<std::vector<int>> ch(segments.size());
    for (const auto& s : segments)
        if (s.parent >= 0) ch[std::size_t(s.parent)].push_back(s.id);
    return ch;
}

namespace {

std::vector<std::size_t> skeleton_neighbors(const BinaryMask& m, std::size_t p) {
    const Grid& g = m.grid;
    const VoxelIndex v = g.unlin(p);
    std::vector<std::size_t> out;
    for (const auto& d : neighbor_offsets(Connectivity::C26)) {
        const VoxelIndex n{v.i + d[0], v.j + d[1], v.k + d[2]};
        if (g.in_bounds(n) && m.membership[g.lin(n)]) out.push_back(g.lin(n));
    }
    return out;
}

} // namespace

CenterlineGraph build_graph(const Skeleton& skel) {
    const BinaryMask& m = skel.mask;
    const Grid& g = m.grid;
    if (m.count() == 0) throw EmptyMask("build_graph: skeleton is empty");

    const std::vector<VoxelClass> cls = classify(skel);

    CenterlineGraph graph;
    graph.grid = g;

    constexpr int kUnassigned = -1;
    std::vector<int> node_of(g.size(), kUnassigned);        // voxel -> node id
    std::vector<std::uint8_t> on_edge(g.size(), 0);

    // Junction clusters: 26-components of junction-labeled voxels.
    for (std::size_t start = 0; start < g.size(); ++start) {
        if (cls[start] != VoxelClass::Junction || node_of[start] != kUnassigned) continue;
        GraphNode node;
        std::vector<std::size_t> work{start};
        node_of[start] = int(graph.nodes.size());
        while (!work.empty()) {
            const std::size_t cur = work.back();
            work.pop_back();
            node.voxels.push_back(cur);
            for (const std::size_t nb : skeleton_neighbors(m, cur)) {
                if (cls[nb] == VoxelClass::Junction && node_of[nb] == kUnassigned) {
                    node_of[nb] = int(graph.nodes.size());
                    work.push_back(nb);
                }
            }
        }
        std::sort(node.voxels.begin(), node.voxels.end());
        node.rep = node.voxels.front();
        graph.nodes.push_back(std::move(node));
    }
    // Endpoint voxels become single-voxel nodes.
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (cls[p] != VoxelClass::Endpoint) continue;
        GraphNode node;
        node.voxels = {p};
        node.rep = p;
        node.is_endpoint = true;
        node_of[p] = int(graph.nodes.size());
        graph.nodes.push_back(std::move(node));
    }

    auto trace = [&](int node_id, std::size_t attach, std::size_t first_regular) {
        GraphEdge e;
        e.a = node_id;
        e.a_attach = attach;
        std::size_t prev = attach, cur = first_regular;
        while (true) {
            e.path.push_back(cur);
            on_edge[cur] = 1;
            std::size_t next = std::size_t(-1);
            for (const std::size_t nb : skeleton_neighbors(m, cur)) {
                if (nb == prev) continue;
                // A regular voxel has exactly two skeleton neighbors; the one
                // we did not come from continues the chain.
                next = nb;
            }
            if (next == std::size_t(-1)) {
                // Chain dead-ends inside the cluster we started from (can
                // happen when attach and cur see the same cluster).
                e.b = node_id;
                e.b_attach = attach;
                break;
            }
            if (node_of[next] != kUnassigned) {
                e.b = node_of[next];
                e.b_attach = next;
                break;
            }
            prev = cur;
            cur = next;
        }
        graph.edges.push_back(std::move(e));
    };

    // Trace edges out of every node, ascending node id / cluster voxel /
    // neighbor order, so edge ids are canonical.
    for (int n = 0; n < int(graph.nodes.size()); ++n) {
        for (const std::size_t v : graph.nodes[std::size_t(n)].voxels) {
            for (const std::size_t nb : skeleton_neighbors(m, v)) {
                if (cls[nb] == VoxelClass::Regular && !on_edge[nb]) {
                    trace(n, v, nb);
                } else if (node_of[nb] != kUnassigned && node_of[nb] != n && nb > v) {
                    // Directly adjacent nodes: a zero-interior edge, created
                    // once (from the lower attach voxel).
                    GraphEdge e;
                    e.a = n;
                    e.a_attach = v;
                    e.b = node_of[nb];
                    e.b_attach = nb;
                    graph.edges.push_back(std::move(e));
                }
            }
        }
    }

    // Pure cycles (rings of regular voxels unreachable from any node): promote
    // the lowest-index voxel to a node and trace the loop.
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (cls[p] != VoxelClass::Regular || on_edge[p] || node_of[p] != kUnassigned) continue;
        GraphNode node;
        node.voxels = {p};
        node.rep = p;
        const int id = int(graph.nodes.size());
        node_of[p] = id;
        graph.nodes.push_back(std::move(node));
        const auto nbs = skeleton_neighbors(m, p);
        if (!nbs.empty() && !on_edge[nbs.front()]) trace(id, p, nbs.front());
    }

    return graph;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[std::size_t(x)] != x) {
            parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
            x = parent[std::size_t(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::size_t(b)] = a;
        return true;
    }
};

double edge_radius(const GraphEdge& e, const Grid& g, const DistanceField* edt) {
    if (!edt) return double(e.path.size());  // proxy when no EDT is supplied
    double sum = 0.0;
    std::size_t n = 0;
    for (const std::size_t p : e.path) {
        sum += edt->distance_um(p);
        ++n;
    }
    if (n == 0) {
        sum = edt->distance_um(e.a_attach) + edt->distance_um(e.b_attach);
        n = 2;
    }
    (void)g;
    return sum / double(n);
}

} // namespace

VesselTree root_tree(const CenterlineGraph& graph, VoxelIndex root_hint,
                     const DistanceField* edt) {
    if (graph.nodes.empty()) throw EmptyMask("root_tree: empty graph");
    const Grid& g = graph.grid;

    // Root = endpoint node nearest the hint (ties: lowest representative).
    int root_node = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n < int(graph.nodes.size()); ++n) {
        const GraphNode& node = graph.nodes[std::size_t(n)];
        if (!node.is_endpoint) continue;
        const double d = g.metric(g.unlin(node.rep), root_hint);
        if (d < best || (d == best && root_node >= 0 &&
                         node.rep < graph.nodes[std::size_t(root_node)].rep)) {
            best = d;
            root_node = n;
        }
    }
    if (root_node < 0) throw NoRootCandidate();

    // Maximum spanning forest on mean-EDT radius: every cycle loses its
    // thinnest edge.
    std::vector<int> order(graph.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> weight(graph.edges.size());
    for (std::size_t e = 0; e < graph.edges.size(); ++e)
        weight[e] = edge_radius(graph.edges[e], g, edt);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return weight[std::size_t(x)] > weight[std::size_t(y)]; });
    UnionFind uf(graph.nodes.size());
    std::vector<std::uint8_t> keep(graph.edges.size(), 0);
    VesselTree tree;
    tree.grid = g;
    for (const int e : order) {
        const GraphEdge& ge = graph.edges[std::size_t(e)];
        if (ge.a != ge.b && uf.unite(ge.a, ge.b))
            keep[std::size_t(e)] = 1;
        else
            tree.broken_cycle_edges.push_back(e);
    }
    std::sort(tree.broken_cycle_edges.begin(), tree.broken_cycle_edges.end());

    // Breadth-first orientation from the root node.
    std::vector<std::vector<int>> incident(graph.nodes.size());
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        if (!keep[e]) continue;
        incident[std::size_t(graph.edges[e].a)].push_back(int(e));
        incident[std::size_t(graph.edges[e].b)].push_back(int(e));
    }
    // Junction clusters of fat vessels span several voxels; attach voxels sit
    // on the cluster rim, so paths that stop there systematically miss the
    // bifurcation point.  Extend every path to a shared central cluster voxel:
    // the member with the largest EDT (the bifurcation apex sits deepest
    // inside the vessel union), or the centroid medoid without an EDT.
    const auto node_center = [&](int nid) {
        const GraphNode& nd = graph.nodes[std::size_t(nid)];
        if (nd.voxels.size() <= 1) return nd.rep;
        if (edt) {
            std::size_t best = nd.voxels.front();
            double best_d = -1.0;
            for (const std::size_t p : nd.voxels) {  // ascending, ties stay lowest
                const double d = edt->distance_um(g.unlin(p));
                if (d > best_d) {
                    best_d = d;
                    best = p;
                }
            }
            // The cluster holds only skeleton voxels, which hug the rim of the
            // junction blob; the bifurcation apex is the nearby local EDT
            // maximum.  Steepest-ascent walk over the lumen until EDT stops
            // strictly increasing (the ridge of a straight vessel is flat, so
            // the walk cannot run away along a branch).
            for (;;) {
                const VoxelIndex v = g.unlin(best);
                std::size_t next = best;
                double next_d = best_d;
                for (int dk = -1; dk <= 1; ++dk)
                    for (int dj = -1; dj <= 1; ++dj)
                        for (int di = -1; di <= 1; ++di) {
                            const VoxelIndex w{v.i + di, v.j + dj, v.k + dk};
                            if (!g.in_bounds(w)) continue;
                            const double d = edt->distance_um(w);
                            const std::size_t lw = g.lin(w);
                            if (d > next_d || (d == next_d && d > best_d && lw < next))
                                next = lw, next_d = d;
                        }
                if (next == best) break;
                best = next;
                best_d = next_d;
            }
            return best;
        }
        double ci = 0.0, cj = 0.0, ck = 0.0;
        for (const std::size_t p : nd.voxels) {
            const VoxelIndex v = g.unlin(p);
            ci += v.i;
            cj += v.j;
            ck += v.k;
        }
        ci /= double(nd.voxels.size());
        cj /= double(nd.voxels.size());
        ck /= double(nd.voxels.size());
        std::size_t best = nd.voxels.front();
        double best_d = std::numeric_limits<double>::infinity();
        for (const std::size_t p : nd.voxels) {  // ascending, so ties stay lowest
            const VoxelIndex v = g.unlin(p);
            const double d = (v.i - ci) * (v.i - ci) + (v.j - cj) * (v.j - cj) +
                             (v.k - ck) * (v.k - ck);
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
        return best;
    };
    std::vector<std::uint8_t> node_seen(graph.nodes.size(), 0);
    std::vector<std::uint8_t> edge_done(graph.edges.size(), 0);
    struct QItem {
        int node;
        int via_segment;  // segment that reached this node, -1 at root
    };
    std::deque<QItem> queue{{root_node, -1}};
    node_seen[std::size_t(root_node)] = 1;
    while (!queue.empty()) {
        const QItem it = queue.front();
        queue.pop_front();
        for (const int e : incident[std::size_t(it.node)]) {
            if (edge_done[std::size_t(e)]) continue;
            edge_done[std::size_t(e)] = 1;
            const GraphEdge& ge = graph.edges[std::size_t(e)];
            const bool forward = ge.a == it.node;
            const int other = forward ? ge.b : ge.a;
            Segment s;
            s.id = int(tree.segments.size());
            s.parent = it.via_segment;
            s.generation = it.via_segment < 0
                               ? 1
                               : tree.segments[std::size_t(it.via_segment)].generation + 1;
            const std::size_t near_attach = forward ? ge.a_attach : ge.b_attach;
            const std::size_t far_attach = forward ? ge.b_attach : ge.a_attach;
            const std::size_t near_center = node_center(it.node);
            const std::size_t far_center = node_center(other);
            if (near_center != near_attach) s.path.push_back(g.unlin(near_center));
            s.path.push_back(g.unlin(near_attach));
            if (forward)
                for (const std::size_t p : ge.path) s.path.push_back(g.unlin(p));
            else
                for (auto r = ge.path.rbegin(); r != ge.path.rend(); ++r)
                    s.path.push_back(g.unlin(*r));
            s.path.push_back(g.unlin(far_attach));
            if (far_center != far_attach) s.path.push_back(g.unlin(far_center));
            tree.segments.push_back(std::move(s));
            if (!node_seen[std::size_t(other)]) {
                node_seen[std::size_t(other)] = 1;
                queue.push_back({other, int(tree.segments.size()) - 1});
            }
        }
    }
    tree.root = 0;
    return tree;
}

namespace {

// Arc length of the voxel path after a small moving-average smoothing of the
// coordinates.  Raw 26-connected voxel chains of oblique vessels run up to
// ~20% long (staircase effect); averaging each point with its neighbours puts
// the polyline back on the axis.  The window radius shrinks to 0 at the ends,
// so endpoints stay anchored and straight axis-aligned paths are unchanged.
double polyline_length_um(const std::vector<VoxelIndex>& path, const Grid& g) {
    const std::size_t n = path.size();
    if (n < 2) return 0.0;
    const auto smoothed = [&](std::size_t i) {
        const std::size_t r = std::min({std::size_t(2), i, n - 1 - i});
        std::array<double, 3> p{0.0, 0.0, 0.0};
        for (std::size_t t = i - r; t <= i + r; ++t) {
            p[0] += double(path[t].i) * g.spacing[0];
            p[1] += double(path[t].j) * g.spacing[1];
            p[2] += double(path[t].k) * g.spacing[2];
        }
        for (double& c : p) c /= double(2 * r + 1);
        return p;
    };
    double len = 0.0;
    auto prev = smoothed(0);
    for (std::size_t i = 1; i < n; ++i) {
        const auto p = smoothed(i);
        len += std::hypot(p[0] - prev[0], p[1] - prev[1], p[2] - prev[2]);
        prev = p;
    }
    return len;
}

// tip_front / tip_back mark path ends that are free tips (the root inlet or a
// terminal leaf) rather than junction attachments.  The skeleton of a
// rounded vessel end overruns the axis endpoint into the cap; how far is not
// directly observable, but inside a hemispherical cap the tip EDT shrinks by
// exactly the distance travelled past the endpoint, so the overrun is the
// local radius minus the tip EDT.
void measure_segment(Segment& s, const Grid& g, const DistanceField& edt,
                     bool tip_front, bool tip_back) {
    s.length_um = polyline_length_um(s.path, g);
    const std::size_t n = s.path.size();
    if (n == 0) return;
    // The EDT reaches the nearest background voxel *center*, and the skeleton
    // sits up to half a voxel off the true axis; a quarter-voxel bump on the
    // radius splits the difference between those two opposing biases.
    const double vox = std::min({g.spacing[0], g.spacing[1], g.spacing[2]});
    const auto radius = [&](const VoxelIndex& v) {
        return edt.distance_um(v) + 0.25 * vox;
    };
    if (n == 1) {
        s.diameter_um = 2.0 * radius(s.path.front());
        if (s.length_um == 0.0) s.length_um = g.spacing[0];
        return;
    }
    const auto junction_trim = [&](const VoxelIndex& v) {
        return std::size_t(std::lround(edt.distance_um(v) / vox));
    };
    // Trim junction bulges: at each end, the smaller of a quarter of the path
    // and the local junction radius (in voxels).
    const std::size_t quarter = n / 4;
    std::size_t trim_a = std::min(quarter, junction_trim(s.path.front()));
    std::size_t trim_b = std::min(quarter, junction_trim(s.path.back()));
    if (trim_a + trim_b >= n) {
        trim_a = trim_b = 0;  // degenerate, fall back to the whole path
    }
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = trim_a; i < n - trim_b; ++i) {
        sum += radius(s.path[i]);
        ++cnt;
    }
    if (cnt == 0) {
        sum = radius(s.path[n / 2]);
        cnt = 1;
    }
    s.diameter_um = 2.0 * sum / double(cnt);
    // Tip correction: march from the end voxel along the outward tangent until
    // the sample leaves the lumen.  A wall farther than the local radius means
    // the skeleton stopped inside the straight part (extend by the excess); a
    // closer wall means it overran into the rounded end cap (trim).  A march
    // that exits the grid is a vessel cut by the volume face, where the path
    // length is already right.
    const double r_est = 0.5 * s.diameter_um;
    const auto tip_correction = [&](bool front_end) {
        const VoxelIndex tipv = front_end ? s.path.front() : s.path.back();
        const std::size_t m = std::min<std::size_t>(3, n - 1);
        const VoxelIndex refv = front_end ? s.path[m] : s.path[n - 1 - m];
        std::array<double, 3> d{double(tipv.i - refv.i) * g.spacing[0],
                                double(tipv.j - refv.j) * g.spacing[1],
                                double(tipv.k - refv.k) * g.spacing[2]};
        const double norm = std::hypot(d[0], d[1], d[2]);
        if (norm == 0.0) return 0.0;
        for (double& c : d) c /= norm;
        const double step = 0.25 * vox;
        const double tmax = 2.0 * r_est + 2.0 * vox;
        for (double t = step; t <= tmax; t += step) {
            const VoxelIndex v{
                int(std::lround((double(tipv.i) * g.spacing[0] + t * d[0]) / g.spacing[0])),
                int(std::lround((double(tipv.j) * g.spacing[1] + t * d[1]) / g.spacing[1])),
                int(std::lround((double(tipv.k) * g.spacing[2] + t * d[2]) / g.spacing[2]))};
            if (!g.in_bounds(v)) return 0.0;  // cut by the face
            // Hit the wall.  Trims measure actual overrun and stand as-is;
            // extensions reconstruct geometry the thinning ate, and lattice
            // bias on fat vessels inflates them, so cap at 1.5 voxels.
            if (edt.distance_um(v) <= 0.0) return std::min(t - r_est, 1.5 * vox);
        }
        return 0.0;  // no wall within reach: geometry unclear, leave it alone
    };
    if (tip_front) s.length_um += tip_correction(true);
    if (tip_back) s.length_um += tip_correction(false);
    s.length_um = std::max(s.length_um, 0.0);
}

} // namespace

VesselTree measure(const VesselTree& tree, const DistanceField& edt) {
    if (!tree.grid.same_grid(edt.grid)) throw GridMismatch("measure: EDT grid differs from tree grid");
    VesselTree out = tree;
    const auto ch = out.children();
    for (auto& s : out.segments)
        measure_segment(s, out.grid, edt, s.parent < 0, ch[std::size_t(s.id)].empty());
    return out;
}

namespace {

// Renumber segments breadth-first from the root so ids stay canonical after
// pruning, and recompute generations.
VesselTree renumber(const VesselTree& in, const std::vector<std::uint8_t>& alive, int root_id) {
    VesselTree out;
    out.grid = in.grid;
    out.broken_cycle_edges = in.broken_cycle_edges;
    std::vector<std::vector<int>> ch(in.segments.size());
    for (const auto& s : in.segments)
        if (alive[std::size_t(s.id)] && s.parent >= 0 && alive[std::size_t(s.parent)])
            ch[std::size_t(s.parent)].push_back(s.id);
    std::vector<int> new_id(in.segments.size(), -1);
    std::deque<int> queue{root_id};
    while (!queue.empty()) {
        const int old = queue.front();
        queue.pop_front();
        Segment s = in.segments[std::size_t(old)];
        const int id = int(out.segments.size());
        new_id[std::size_t(old)] = id;
        s.id = id;
        s.parent = s.parent >= 0 ? new_id[std::size_t(s.parent)] : -1;
        s.generation = s.parent >= 0 ? out.segments[std::size_t(s.parent)].generation + 1 : 1;
        out.segments.push_back(std::move(s));
        for (const int c : ch[std::size_t(old)]) queue.push_back(c);
    }
    out.root = 0;
    return out;
}

} // namespace

VesselTree prune(const VesselTree& tree, const DistanceField& edt, double factor) {
    VesselTree cur = tree;
    while (true) {
        std::vector<std::uint8_t> alive(cur.segments.size(), 1);
        auto ch = cur.children();
        bool removed = false;
        for (const auto& s : cur.segments) {
            if (s.id == cur.root) continue;
            if (!ch[std::size_t(s.id)].empty()) continue;
            const double attach_radius = edt.distance_um(s.path.front());
            if (s.length_um < factor * attach_radius) {
                alive[std::size_t(s.id)] = 0;
                removed = true;
            }
        }
        if (!removed) break;

        VesselTree next = renumber(cur, alive, cur.root);

        // Merge single-child chains left by the removals and remeasure them.
        ch = next.children();
        std::vector<std::uint8_t> alive2(next.segments.size(), 1);
        bool merged = false;
        for (auto& s : next.segments) {
            if (!alive2[std::size_t(s.id)]) continue;
            while (ch[std::size_t(s.id)].size() == 1) {
                const int c = ch[std::size_t(s.id)].front();
                Segment& child = next.segments[std::size_t(c)];
                if (!s.path.empty() && !child.path.empty() && s.path.back() == child.path.front())
                    s.path.insert(s.path.end(), child.path.begin() + 1, child.path.end());
                else
                    s.path.insert(s.path.end(), child.path.begin(), child.path.end());
                ch[std::size_t(s.id)] = ch[std::size_t(c)];
                for (const int gc : ch[std::size_t(s.id)])
                    next.segments[std::size_t(gc)].parent = s.id;
                alive2[std::size_t(c)] = 0;
                merged = true;
            }
            measure_segment(s, next.grid, edt, s.parent < 0, ch[std::size_t(s.id)].empty());
        }
        cur = merged ? renumber(next, alive2, next.root) : std::move(next);
    }
    return cur;
}

GenerationStats generation_stats(const VesselTree& tree) {
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> per_gen;
    for (const auto& s : tree.segments) {
        per_gen[s.generation].first.push_back(s.diameter_um);
        per_gen[s.generation].second.push_back(s.length_um);
    }
    const auto mean_std = [](const std::vector<double>& xs) {
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
        if (xs.size() < 2) return std::pair{mean, 0.0};
        double ss = 0.0;
        for (const double x : xs) ss += (x - mean) * (x - mean);
        return std::pair{mean, std::sqrt(ss / double(xs.size() - 1))};
    };
    GenerationStats out;
    for (const auto& [gen, dl] : per_gen) {
        GenerationStats::Row row;
        row.generation = gen;
        row.count = dl.first.size();
        std::tie(row.diam_mean_um, row.diam_std_um) = mean_std(dl.first);
        std::tie(row.len_mean_um, row.len_std_um) = mean_std(dl.second);
        out.rows.push_back(row);
    }
    return out;
}

CumulativeDistribution cumulative_distribution(const VesselTree& tree) {
    std::vector<double> d;
    d.reserve(tree.segments.size());
    for (const auto& s : tree.segments) d.push_back(s.diameter_um);
    std::sort(d.begin(), d.end());
    CumulativeDistribution out;
    const std::size_t total = d.size();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i + 1 < d.size() && d[i + 1] == d[i]) continue;  // last of a run
        out.diameter_um.push_back(d[i]);
        out.count.push_back(total - (i + 1));  // strictly greater
    }
    return out;
}

PowerLawFit fit_power_law(const CumulativeDistribution& dist,
                          std::optional<std::pair<double, double>> window) {
    std::vector<std::pair<double, double>> pts;  // (log d, log N)
    const std::size_t total = dist.count.empty() ? 0 : dist.count.front() + 1;
    const std::size_t ndist = dist.diameter_um.size();
    for (std::size_t i = 0; i < ndist; ++i) {
        const double d = dist.diameter_um[i];
        const std::size_t n = dist.count[i];
        if (n == 0) continue;
        if (window) {
            if (d < window->first || d > window->second) continue;
        } else {
            // Intermediary-region heuristic: skip the 3 largest distinct
            // diameters and any point holding more than 90% of all segments.
            if (i + 3 >= ndist) continue;
            if (double(n) > 0.9 * double(total)) continue;
        }
        pts.emplace_back(std::log(d), std::log(double(n)));
    }
    if (pts.size() < 3) throw InsufficientData("fit_power_law: fewer than 3 usable points");

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double n = double(pts.size());
    const double cov = sxy - sx * sy / n;
    const double varx = sxx - sx * sx / n;
    const double vary = syy - sy * sy / n;
    const double slope = cov / varx;

    PowerLawFit fit;
    fit.gamma = -slope;
    fit.r2 = vary > 0 ? (cov * cov) / (varx * vary) : 1.0;
    fit.points = pts.size();
    fit.dmin_um = std::exp(pts.front().first);
    fit.dmax_um = std::exp(pts.back().first);
    return fit;
}

double murray_exponent(double d_parent, double d_child1, double d_child2, bool& defined) {
    defined = false;
    if (d_parent <= 0 || d_child1 <= 0 || d_child2 <= 0) return 0.0;
    if (std::max(d_child1, d_child2) >= d_parent) return 0.0;
    const double r1 = d_child1 / d_parent;
    const double r2 = d_child2 / d_parent;
    const auto f = [&](double k) { return std::pow(r1, k) + std::pow(r2, k) - 1.0; };
    // f is strictly decreasing, f(0) = 1; a root exists in (0, 10] iff f(10) <= 0.
    if (f(10.0) > 0.0) return 0.0;
    double lo = 0.0, hi = 10.0;
    while (hi - lo > 1e-9) {
        const double mid = (lo + hi) / 2.0;
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    defined = true;
    return (lo + hi) / 2.0;
}

std::vector<MurrayRecord> murray_exponents(const VesselTree& tree) {
    std::vector<MurrayRecord> out;
    const auto ch = tree.children();
    for (const auto& s : tree.segments) {
        if (ch[std::size_t(s.id)].size() != 2) continue;
        MurrayRecord r;
        r.node_id = s.id;
        r.d_parent_um = s.diameter_um;
        r.d_child1_um = tree.segments[std::size_t(ch[std::size_t(s.id)][0])].diameter_um;
        r.d_child2_um = tree.segments[std::size_t(ch[std::size_t(s.id)][1])].diameter_um;
        r.k = murray_exponent(r.d_parent_um, r.d_child1_um, r.d_child2_um, r.defined);
        out.push_back(r);
    }
    return out;
}

} // namespace vasc
