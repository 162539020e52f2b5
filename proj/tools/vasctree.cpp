// vasctree: command-line front end for the vascular morphometry pipeline.
//
// Subcommands: segment, skeletonize, tree, stats, maps, aggregate, phantom,
// run.  Every subcommand takes --config <json> (flags given on the command
// line win over config-file values) and --threads N (0 = auto; never affects
// outputs).  A run manifest JSON is written next to each subcommand's outputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vasc/distance.hpp"
#include "vasc/errors.hpp"
#include "vasc/fieldmaps.hpp"
#include "vasc/io.hpp"
#include "vasc/parallel.hpp"
#include "vasc/phantom.hpp"
#include "vasc/segmentation.hpp"
#include "vasc/skeleton.hpp"
#include "vasc/tree.hpp"
#include "vasc/volume.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vasc;

namespace {

// ---------------------------------------------------------------------------
// Small utilities

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Connectivity conn_from_int(int c) {
    switch (c) {
        case 6: return Connectivity::C6;
        case 18: return Connectivity::C18;
        case 26: return Connectivity::C26;
        default: throw InvalidParameter("--conn must be 6, 18 or 26");
    }
}

void require_set(const std::string& v, const char* flag) {
    if (v.empty())
        throw InvalidParameter(std::string(flag) + " is required (flag or config key)");
}

VoxelIndex to_voxel(const std::vector<int>& v, const char* flag) {
    if (v.size() != 3) throw InvalidParameter(std::string(flag) + " needs i,j,k");
    return {v[0], v[1], v[2]};
}

DistanceField lumen_edt(const BinaryMask& lumen) {
    BinaryMask bg(lumen.grid);
    for (std::size_t p = 0; p < lumen.grid.size(); ++p)
        bg.membership[p] = lumen.membership[p] ? 0 : 1;
    return distance_transform(bg);
}

// Deterministic root hint when none is given: the skeleton voxel with the
// largest lumen radius (ties to the lowest linear index) — the inlet is the
// thickest point of a vascular tree.
VoxelIndex auto_root(const Skeleton& skel, const DistanceField& edt) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t p = 0; p < skel.mask.grid.size(); ++p) {
        if (!skel.mask.membership[p]) continue;
        const double d = edt.distance_um(p);
        if (d > best_d) {
            best_d = d;
            best = p;
        }
    }
    if (best_d < 0.0) throw EmptyMask("skeleton is empty");
    return skel.mask.grid.unlin(best);
}

// Deterministic seed when none is given: in-range voxel with the lowest
// linear index.
VoxelIndex auto_seed(const Volume3D& vol, double lo, double hi) {
    for (std::size_t p = 0; p < vol.grid.size(); ++p)
        if (vol.values[p] >= lo && vol.values[p] <= hi) return vol.grid.unlin(p);
    throw SeedOutsideRange("no voxel falls in [" + fmt(lo) + ", " + fmt(hi) + "]");
}

// ---------------------------------------------------------------------------
// Run manifest

struct Manifest {
    std::string subcommand;
    json config = json::object();
    json input_hashes = json::object();
    json timings_ms = json::object();
    json warnings = json::object();

    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void stage_done(const std::string& stage) {
        const auto t1 = std::chrono::steady_clock::now();
        timings_ms[stage] =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        t0 = t1;
    }
    void hash_input(const std::string& key, const fs::path& header_path) {
        // Hash the raw payload named by the header (provenance of the data,
        // not the metadata file).
        fs::path raw = header_path;
        raw.replace_extension(".raw");
        if (fs::exists(raw)) input_hashes[key] = sha256_file(raw);
        else input_hashes[key] = sha256_file(header_path);
    }
    void write(const fs::path& path, const std::string& version) const {
        json m;
        m["tool"] = "vasctree";
        m["version"] = version;
        m["subcommand"] = subcommand;
        m["config"] = config;
        m["input_sha256"] = input_hashes;
        m["timings_ms"] = timings_ms;
        m["warnings"] = warnings;
        std::ofstream out(path);
        out << m.dump(2) << "\n";
    }
};

// ---------------------------------------------------------------------------
// Config-file < command-line precedence

struct ConfigSource {
    json cfg = json::object();
    CLI::App* app = nullptr;

    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidParameter("cannot read config file: " + path);
        try {
            in >> cfg;
        } catch (const json::exception& e) {
            throw InvalidParameter("config file is not valid JSON: " + std::string(e.what()));
        }
    }
    // Overwrite `var` from the config unless the flag appeared on the CLI.
    template <class T>
    void fill(const char* flag, const char* key, T& var) const {
        if (app->count(flag) == 0 && cfg.contains(key)) var = cfg.at(key).get<T>();
    }
};

// ---------------------------------------------------------------------------
// CSV writers (fixed column schemas; see README)

void write_segments_csv(const fs::path& path, const VesselTree& tree) {
    std::ofstream out(path);
    out << "id,parent_id,generation,length_um,diameter_um,n_voxels\n";
    for (const auto& s : tree.segments)
        out << s.id << ',' << s.parent << ',' << s.generation << ',' << fmt(s.length_um)
            << ',' << fmt(s.diameter_um) << ',' << s.path.size() << '\n';
}

void write_generation_stats_csv(const fs::path& path, const GenerationStats& st) {
    std::ofstream out(path);
    out << "generation,count,diam_mean,diam_std,len_mean,len_std\n";
    for (const auto& r : st.rows)
        out << r.generation << ',' << r.count << ',' << fmt(r.diam_mean_um) << ','
            << fmt(r.diam_std_um) << ',' << fmt(r.len_mean_um) << ',' << fmt(r.len_std_um)
            << '\n';
}

void write_cumulative_csv(const fs::path& path, const CumulativeDistribution& d) {
    std::ofstream out(path);
    out << "d_um,N\n";
    for (std::size_t i = 0; i < d.diameter_um.size(); ++i)
        out << fmt(d.diameter_um[i]) << ',' << d.count[i] << '\n';
}

void write_murray_csv(const fs::path& path, const std::vector<MurrayRecord>& recs) {
    std::ofstream out(path);
    out << "node_id,d_parent,d_child1,d_child2,k,defined\n";
    for (const auto& r : recs)
        out << r.node_id << ',' << fmt(r.d_parent_um) << ',' << fmt(r.d_child1_um) << ','
            << fmt(r.d_child2_um) << ',' << fmt(r.k) << ',' << (r.defined ? 1 : 0) << '\n';
}

void write_power_law_json(const fs::path& path, const PowerLawFit& fit) {
    json j;
    j["gamma"] = fit.gamma;
    j["r2"] = fit.r2;
    j["window"] = {fit.dmin_um, fit.dmax_um};
    j["points"] = fit.points;
    std::ofstream(path) << j.dump(2) << "\n";
}

void write_hist_csv(const fs::path& path, const PerfusionHistogram& h) {
    std::ofstream out(path);
    out << "bin_lo_um,bin_hi_um,count,freq\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out << fmt(h.bin_edges_um[i]) << ',' << fmt(h.bin_edges_um[i + 1]) << ','
            << h.counts[i] << ',' << fmt(h.freq[i]) << '\n';
}

void write_aggregate_csv(const fs::path& path, const SpecimenAggregate& a) {
    std::ofstream out(path);
    out << "bin_lo_um,bin_hi_um,mean_freq,std_freq\n";
    for (std::size_t i = 0; i < a.mean_freq.size(); ++i)
        out << fmt(a.bin_edges_um[i]) << ',' << fmt(a.bin_edges_um[i + 1]) << ','
            << fmt(a.mean_freq[i]) << ',' << fmt(a.std_freq[i]) << '\n';
}

// ---------------------------------------------------------------------------
// CSV readers (stats and aggregate work from files, so the pipeline stages
// stay independently scriptable)

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot read " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

VesselTree tree_from_segments_csv(const fs::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() < 6 || rows[0][0] != "id")
        throw CorruptData(path.string() + ": not a segments CSV");
    VesselTree t;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& c = rows[r];
        if (c.size() < 6) throw CorruptData(path.string() + ": short row");
        Segment s;
        s.id = std::stoi(c[0]);
        s.parent = std::stoi(c[1]);
        s.generation = std::stoi(c[2]);
        s.length_um = std::stod(c[3]);
        s.diameter_um = std::stod(c[4]);
        t.segments.push_back(std::move(s));
        if (t.segments.back().parent < 0) t.root = t.segments.back().id;
    }
    return t;
}

PerfusionHistogram hist_from_csv(const fs::path& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0].size() < 4 || rows[0][0] != "bin_lo_um")
        throw CorruptData(path.string() + ": not a histogram CSV");
    PerfusionHistogram h;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& c = rows[r];
        h.bin_edges_um.push_back(std::stod(c[0]));
        h.counts.push_back(std::size_t(std::stoull(c[2])));
        h.freq.push_back(std::stod(c[3]));
        if (r + 1 == rows.size()) h.bin_edges_um.push_back(std::stod(c[1]));
    }
    if (h.bin_edges_um.size() >= 2) h.bin_width_um = h.bin_edges_um[1] - h.bin_edges_um[0];
    return h;
}

// ---------------------------------------------------------------------------
// Stats + phantom helpers shared between subcommands

void emit_stats(const VesselTree& tree, const fs::path& prefix,
                std::optional<std::pair<double, double>> window) {
    write_generation_stats_csv(prefix.string() + "_generation_stats.csv",
                               generation_stats(tree));
    const auto dist = cumulative_distribution(tree);
    write_cumulative_csv(prefix.string() + "_cumulative.csv", dist);
    write_murray_csv(prefix.string() + "_murray.csv", murray_exponents(tree));
    try {
        write_power_law_json(prefix.string() + "_power_law.json", fit_power_law(dist, window));
    } catch (const InsufficientData&) {
        json j;
        j["gamma"] = nullptr;
        j["error"] = "insufficient points in the fit window";
        std::ofstream(prefix.string() + "_power_law.json") << j.dump(2) << "\n";
    }
}

json truth_to_json(const GroundTruth& gt, const RasterInfo& info) {
    json j;
    j["generations"] = gt.spec.generations;
    j["root_diameter_um"] = gt.spec.root_diameter_um;
    j["root_length_um"] = gt.spec.root_length_um;
    j["ratio1"] = gt.spec.ratio1;
    j["ratio2"] = gt.spec.ratio2;
    j["length_ratio"] = gt.spec.length_ratio;
    j["angle1_deg"] = gt.spec.angle1_deg;
    j["angle2_deg"] = gt.spec.angle2_deg;
    j["seed"] = gt.spec.seed;
    j["jitter"] = gt.spec.jitter;
    j["origin_um"] = info.origin_um;
    j["segments"] = json::array();
    for (const auto& s : gt.segments) {
        json e;
        e["id"] = s.id;
        e["parent"] = s.parent;
        e["p0_um"] = s.p0;
        e["p1_um"] = s.p1;
        e["diameter_um"] = s.diameter_um;
        e["length_um"] = s.length_um;
        e["generation"] = s.generation;
        j["segments"].push_back(e);
    }
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vascular branching morphometry pipeline"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto; outputs unaffected)");

    // ---- segment ----------------------------------------------------------
    auto* seg = app.add_subcommand("segment", "seeded region growing on a gray volume");
    std::string seg_config, seg_input, seg_output, seg_preset;
    double seg_lo = 1500.0, seg_hi = std::numeric_limits<double>::infinity();
    std::vector<int> seg_seed;
    int seg_conn = 26;
    seg->add_option("--config", seg_config, "JSON config file");
    seg->add_option("--input", seg_input, "input volume header");
    seg->add_option("--output", seg_output, "output mask header");
    seg->add_option("--lo", seg_lo, "lower threshold (native units)");
    seg->add_option("--hi", seg_hi, "upper threshold (native units)");
    seg->add_option("--seed", seg_seed, "seed voxel i,j,k")->expected(3)->delimiter(',');
    seg->add_option("--conn", seg_conn, "connectivity 6|18|26");
    seg->add_option("--preset", seg_preset, "vessel | tissue (built-in thresholds)");

    // ---- skeletonize ------------------------------------------------------
    auto* ske = app.add_subcommand("skeletonize", "topology-preserving thinning of a mask");
    std::string ske_config, ske_input, ske_output;
    ske->add_option("--config", ske_config, "JSON config file");
    ske->add_option("--input", ske_input, "input mask header");
    ske->add_option("--output", ske_output, "output skeleton mask header");

    // ---- tree -------------------------------------------------------------
    auto* tre = app.add_subcommand("tree", "rooted vessel tree from mask + skeleton");
    std::string tre_config, tre_mask, tre_skel, tre_prefix;
    std::vector<int> tre_root;
    double tre_prune = 1.0;
    tre->add_option("--config", tre_config, "JSON config file");
    tre->add_option("--mask", tre_mask, "vessel mask header");
    tre->add_option("--skeleton", tre_skel, "skeleton mask header");
    tre->add_option("--root", tre_root, "root hint voxel i,j,k (default: thickest point)")
        ->expected(3)->delimiter(',');
    tre->add_option("--prune-factor", tre_prune, "leaf pruning factor (0 disables)");
    tre->add_option("--out-prefix", tre_prefix, "output path prefix");

    // ---- stats ------------------------------------------------------------
    auto* sta = app.add_subcommand("stats", "morphometric statistics from a segments CSV");
    std::string sta_config, sta_segments, sta_prefix;
    double sta_dmin = -1.0, sta_dmax = -1.0;
    sta->add_option("--config", sta_config, "JSON config file");
    sta->add_option("--segments", sta_segments, "segments CSV from `tree`");
    sta->add_option("--out-prefix", sta_prefix, "output path prefix");
    sta->add_option("--fit-dmin", sta_dmin, "power-law window lower bound (um)");
    sta->add_option("--fit-dmax", sta_dmax, "power-law window upper bound (um)");

    // ---- maps -------------------------------------------------------------
    auto* map = app.add_subcommand("maps", "local-diameter and perfusion distance maps");
    std::string map_config, map_vessel, map_skel, map_tissue, map_prefix;
    double map_bin = 20.0;
    map->add_option("--config", map_config, "JSON config file");
    map->add_option("--vessel", map_vessel, "vessel mask header");
    map->add_option("--skeleton", map_skel, "skeleton mask header");
    map->add_option("--tissue", map_tissue, "tissue mask header (enables perfusion map)");
    map->add_option("--out-prefix", map_prefix, "output path prefix (used as <name>)");
    map->add_option("--bin-width-um", map_bin, "perfusion histogram bin width");

    // ---- aggregate --------------------------------------------------------
    auto* agg = app.add_subcommand("aggregate", "mean/std across specimen histograms");
    std::string agg_config, agg_output;
    std::vector<std::string> agg_inputs;
    agg->add_option("--config", agg_config, "JSON config file");
    agg->add_option("--inputs", agg_inputs, "histogram CSVs")->expected(-1);
    agg->add_option("--output", agg_output, "aggregate CSV path");

    // ---- phantom ----------------------------------------------------------
    auto* pha = app.add_subcommand("phantom", "analytic binary-tree phantom volume");
    std::string pha_config, pha_output;
    PhantomSpec pspec;
    std::vector<int> pha_dims{128, 128, 128};
    std::vector<double> pha_spacing{20.0, 20.0, 20.0}, pha_angles;
    double pha_tissue_margin = 100.0;
    pha->add_option("--config", pha_config, "JSON config file");
    pha->add_option("--generations", pspec.generations, "tree depth (root = 1)");
    pha->add_option("--d0-um", pspec.root_diameter_um, "root diameter");
    pha->add_option("--root-length-um", pspec.root_length_um, "root length");
    pha->add_option("--ratio", pspec.ratio1, "child 1 diameter ratio");
    pha->add_option("--ratio2", pspec.ratio2, "child 2 diameter ratio (default: --ratio)");
    pha->add_option("--length-ratio", pspec.length_ratio, "child/parent length ratio");
    pha->add_option("--angles", pha_angles, "branching half-angles a1,a2 (deg)")->expected(2)->delimiter(',');
    pha->add_option("--dims", pha_dims, "grid dims nx,ny,nz")->expected(3)->delimiter(',');
    pha->add_option("--spacing-um", pha_spacing, "voxel spacing sx,sy,sz")->expected(3)->delimiter(',');
    pha->add_option("--seed", pspec.seed, "jitter rng seed");
    pha->add_option("--jitter", pspec.jitter, "relative jitter (0 = off)");
    pha->add_option("--tissue-margin-um", pha_tissue_margin, "tissue envelope margin");
    pha->add_option("--output", pha_output, "output volume header path");

    // ---- run --------------------------------------------------------------
    auto* run = app.add_subcommand("run", "full pipeline: segment ... stats + maps");
    std::string run_config, run_input, run_prefix;
    double run_lo = 1500.0, run_hi = std::numeric_limits<double>::infinity();
    double run_tlo = 600.0, run_thi = 1200.0;
    int run_conn = 26, run_tconn = 6;
    std::vector<int> run_seed, run_root;
    double run_prune = 1.0, run_bin = 20.0, run_dmin = -1.0, run_dmax = -1.0;
    bool run_no_tissue = false;
    run->add_option("--config", run_config, "JSON config file");
    run->add_option("--input", run_input, "input gray volume header");
    run->add_option("--out-prefix", run_prefix, "output path prefix");
    run->add_option("--lo", run_lo, "vessel lower threshold");
    run->add_option("--hi", run_hi, "vessel upper threshold");
    run->add_option("--conn", run_conn, "vessel connectivity 6|18|26");
    run->add_option("--tissue-lo", run_tlo, "tissue lower threshold");
    run->add_option("--tissue-hi", run_thi, "tissue upper threshold");
    run->add_option("--tissue-conn", run_tconn, "tissue connectivity 6|18|26");
    run->add_option("--seed", run_seed, "vessel seed i,j,k (default: first in-range voxel)")
        ->expected(3)->delimiter(',');
    run->add_option("--root", run_root, "root hint i,j,k (default: thickest point)")
        ->expected(3)->delimiter(',');
    run->add_option("--prune-factor", run_prune, "leaf pruning factor");
    run->add_option("--bin-width-um", run_bin, "perfusion histogram bin width");
    run->add_option("--fit-dmin", run_dmin, "power-law window lower bound (um)");
    run->add_option("--fit-dmax", run_dmax, "power-law window upper bound (um)");
    run->add_flag("--no-tissue", run_no_tissue, "skip tissue segmentation and perfusion map");

    // Let --threads (a top-level option) appear after subcommand flags too.
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    set_thread_count(threads);
    const std::string version = VASC_VERSION;

    std::string stage = "startup";
    try {
        // ---- segment ------------------------------------------------------
        if (*seg) {
            ConfigSource cs{json::object(), seg};
            if (!seg_config.empty()) cs.load(seg_config);
            cs.fill("--input", "input", seg_input);
            cs.fill("--output", "output", seg_output);
            cs.fill("--lo", "lo", seg_lo);
            cs.fill("--hi", "hi", seg_hi);
            cs.fill("--seed", "seed", seg_seed);
            cs.fill("--conn", "conn", seg_conn);
            cs.fill("--preset", "preset", seg_preset);
            require_set(seg_input, "--input");
            require_set(seg_output, "--output");

            Manifest man;
            man.subcommand = "segment";
            stage = "read";
            const auto vol = read_volume(seg_input);
            man.hash_input("input", seg_input);
            man.stage_done("read");

            stage = "segment";
            GrowParams p;
            if (seg_preset == "vessel") p = vessel_preset({});
            else if (seg_preset == "tissue") p = tissue_preset({});
            else if (!seg_preset.empty())
                throw InvalidParameter("--preset must be vessel or tissue");
            if (seg_preset.empty() || seg->count("--lo") || cs.cfg.contains("lo")) p.lo = seg_lo;
            if (seg_preset.empty() || seg->count("--hi") || cs.cfg.contains("hi")) p.hi = seg_hi;
            if (seg_preset.empty() || seg->count("--conn") || cs.cfg.contains("conn"))
                p.conn = conn_from_int(seg_conn);
            p.seed = seg_seed.empty() ? auto_seed(vol, p.lo, p.hi) : to_voxel(seg_seed, "--seed");
            const auto mask = region_grow(vol, p);
            man.stage_done("segment");

            stage = "write";
            write_mask(mask, seg_output);
            man.config = {{"lo", p.lo},
                          {"hi", p.hi},
                          {"seed", {p.seed.i, p.seed.j, p.seed.k}},
                          {"conn", seg_conn},
                          {"preset", seg_preset}};
            man.warnings["mask_voxels"] = mask.count();
            man.write(fs::path(seg_output).replace_extension("") .string() + "_manifest.json",
                      version);
        }

        // ---- skeletonize ----------------------------------------------------
        if (*ske) {
            ConfigSource cs{json::object(), ske};
            if (!ske_config.empty()) cs.load(ske_config);
            cs.fill("--input", "input", ske_input);
            cs.fill("--output", "output", ske_output);
            require_set(ske_input, "--input");
            require_set(ske_output, "--output");

            Manifest man;
            man.subcommand = "skeletonize";
            stage = "read";
            const auto mask = read_mask(ske_input);
            man.hash_input("input", ske_input);
            man.stage_done("read");

            stage = "skeletonize";
            const auto skel = thin(mask);
            man.stage_done("skeletonize");

            stage = "write";
            write_mask(skel.mask, ske_output);
            man.warnings["skeleton_voxels"] = skel.mask.count();
            man.write(fs::path(ske_output).replace_extension("").string() + "_manifest.json",
                      version);
        }

        // ---- tree -----------------------------------------------------------
        if (*tre) {
            ConfigSource cs{json::object(), tre};
            if (!tre_config.empty()) cs.load(tre_config);
            cs.fill("--mask", "mask", tre_mask);
            cs.fill("--skeleton", "skeleton", tre_skel);
            cs.fill("--root", "root", tre_root);
            cs.fill("--prune-factor", "prune_factor", tre_prune);
            cs.fill("--out-prefix", "out_prefix", tre_prefix);
            require_set(tre_mask, "--mask");
            require_set(tre_skel, "--skeleton");
            require_set(tre_prefix, "--out-prefix");

            Manifest man;
            man.subcommand = "tree";
            stage = "read";
            const auto vessel = read_mask(tre_mask);
            const Skeleton skel{read_mask(tre_skel)};
            man.hash_input("mask", tre_mask);
            man.hash_input("skeleton", tre_skel);
            man.stage_done("read");

            stage = "tree";
            const auto edt = lumen_edt(vessel);
            const VoxelIndex root =
                tre_root.empty() ? auto_root(skel, edt) : to_voxel(tre_root, "--root");
            auto tree = measure(root_tree(build_graph(skel), root, &edt), edt);
            const std::size_t before = tree.segments.size();
            if (tre_prune > 0.0) tree = prune(tree, edt, tre_prune);
            man.warnings["cycles_broken"] = tree.broken_cycle_edges.size();
            man.warnings["segments_pruned"] = before - tree.segments.size();
            man.stage_done("tree");

            stage = "write";
            write_segments_csv(tre_prefix + "_segments.csv", tree);
            man.config = {{"root", {root.i, root.j, root.k}}, {"prune_factor", tre_prune}};
            man.write(tre_prefix + "_manifest.json", version);
        }

        // ---- stats ----------------------------------------------------------
        if (*sta) {
            ConfigSource cs{json::object(), sta};
            if (!sta_config.empty()) cs.load(sta_config);
            cs.fill("--segments", "segments", sta_segments);
            cs.fill("--out-prefix", "out_prefix", sta_prefix);
            cs.fill("--fit-dmin", "fit_dmin", sta_dmin);
            cs.fill("--fit-dmax", "fit_dmax", sta_dmax);
            require_set(sta_segments, "--segments");
            require_set(sta_prefix, "--out-prefix");

            Manifest man;
            man.subcommand = "stats";
            stage = "read";
            const auto tree = tree_from_segments_csv(sta_segments);
            man.input_hashes["segments"] = sha256_file(sta_segments);
            man.stage_done("read");

            stage = "stats";
            std::optional<std::pair<double, double>> window;
            if (sta_dmin >= 0.0 && sta_dmax > sta_dmin) window = {{sta_dmin, sta_dmax}};
            emit_stats(tree, sta_prefix, window);
            man.stage_done("stats");
            man.config = {{"fit_dmin", sta_dmin}, {"fit_dmax", sta_dmax}};
            man.write(sta_prefix + "_manifest.json", version);
        }

        // ---- maps -----------------------------------------------------------
        if (*map) {
            ConfigSource cs{json::object(), map};
            if (!map_config.empty()) cs.load(map_config);
            cs.fill("--vessel", "vessel", map_vessel);
            cs.fill("--skeleton", "skeleton", map_skel);
            cs.fill("--tissue", "tissue", map_tissue);
            cs.fill("--out-prefix", "out_prefix", map_prefix);
            cs.fill("--bin-width-um", "bin_width_um", map_bin);
            require_set(map_vessel, "--vessel");
            require_set(map_skel, "--skeleton");
            require_set(map_prefix, "--out-prefix");

            Manifest man;
            man.subcommand = "maps";
            stage = "read";
            const auto vessel = read_mask(map_vessel);
            const Skeleton skel{read_mask(map_skel)};
            man.hash_input("vessel", map_vessel);
            man.hash_input("skeleton", map_skel);
            man.stage_done("read");

            stage = "maps";
            const auto diam = local_diameter_map(vessel, skel);
            write_volume(diam, map_prefix + "_diam.json", "f32");
            if (!map_tissue.empty()) {
                const auto tissue = read_mask(map_tissue);
                man.hash_input("tissue", map_tissue);
                const auto perf = perfusion_map(tissue, vessel);
                write_volume(perf, map_prefix + "_perf.json", "f32");
                write_hist_csv(map_prefix + "_perf_hist.csv",
                               perfusion_histogram(perf, map_bin));
            }
            man.stage_done("maps");
            man.config = {{"bin_width_um", map_bin}};
            man.write(map_prefix + "_manifest.json", version);
        }

        // ---- aggregate ------------------------------------------------------
        if (*agg) {
            ConfigSource cs{json::object(), agg};
            if (!agg_config.empty()) cs.load(agg_config);
            cs.fill("--inputs", "inputs", agg_inputs);
            cs.fill("--output", "output", agg_output);
            require_set(agg_output, "--output");
            if (agg_inputs.empty()) throw InvalidParameter("--inputs is required (flag or config key)");

            Manifest man;
            man.subcommand = "aggregate";
            stage = "read";
            std::vector<PerfusionHistogram> hists;
            for (const auto& f : agg_inputs) {
                hists.push_back(hist_from_csv(f));
                man.input_hashes[f] = sha256_file(f);
            }
            man.stage_done("read");

            stage = "aggregate";
            write_aggregate_csv(agg_output, aggregate_specimens(hists));
            man.stage_done("aggregate");
            man.config = {{"specimens", agg_inputs.size()}};
            man.write(fs::path(agg_output).replace_extension("").string() + "_manifest.json",
                      version);
        }

        // ---- phantom --------------------------------------------------------
        if (*pha) {
            ConfigSource cs{json::object(), pha};
            if (!pha_config.empty()) cs.load(pha_config);
            cs.fill("--generations", "generations", pspec.generations);
            cs.fill("--d0-um", "d0_um", pspec.root_diameter_um);
            cs.fill("--root-length-um", "root_length_um", pspec.root_length_um);
            cs.fill("--ratio", "ratio", pspec.ratio1);
            cs.fill("--ratio2", "ratio2", pspec.ratio2);
            cs.fill("--length-ratio", "length_ratio", pspec.length_ratio);
            cs.fill("--angles", "angles", pha_angles);
            cs.fill("--dims", "dims", pha_dims);
            cs.fill("--spacing-um", "spacing_um", pha_spacing);
            cs.fill("--seed", "seed", pspec.seed);
            cs.fill("--jitter", "jitter", pspec.jitter);
            cs.fill("--tissue-margin-um", "tissue_margin_um", pha_tissue_margin);
            cs.fill("--output", "output", pha_output);
            require_set(pha_output, "--output");
            if (!pha_angles.empty()) {
                pspec.angle1_deg = pha_angles[0];
                pspec.angle2_deg = pha_angles[1];
            }
            if (pha->count("--ratio") && !pha->count("--ratio2") && !cs.cfg.contains("ratio2"))
                pspec.ratio2 = pspec.ratio1;

            Manifest man;
            man.subcommand = "phantom";
            stage = "phantom";
            const auto gt = generate(pspec);
            const Dims dims{pha_dims[0], pha_dims[1], pha_dims[2]};
            const Spacing sp{pha_spacing[0], pha_spacing[1], pha_spacing[2]};
            const auto vol = rasterize(gt, dims, sp, pha_tissue_margin);
            const auto info = raster_info(gt, dims, sp, pha_tissue_margin);
            man.stage_done("phantom");

            stage = "write";
            write_volume(vol, pha_output, "u16");
            const fs::path base = fs::path(pha_output).replace_extension("");
            std::ofstream(base.string() + "_truth.json")
                << truth_to_json(gt, info).dump(2) << "\n";
            man.config = {{"generations", pspec.generations},
                          {"d0_um", pspec.root_diameter_um},
                          {"seed", pspec.seed},
                          {"jitter", pspec.jitter}};
            man.write(base.string() + "_manifest.json", version);
        }

        // ---- run ------------------------------------------------------------
        if (*run) {
            ConfigSource cs{json::object(), run};
            if (!run_config.empty()) cs.load(run_config);
            cs.fill("--input", "input", run_input);
            cs.fill("--out-prefix", "out_prefix", run_prefix);
            cs.fill("--lo", "lo", run_lo);
            cs.fill("--hi", "hi", run_hi);
            cs.fill("--conn", "conn", run_conn);
            cs.fill("--tissue-lo", "tissue_lo", run_tlo);
            cs.fill("--tissue-hi", "tissue_hi", run_thi);
            cs.fill("--tissue-conn", "tissue_conn", run_tconn);
            cs.fill("--seed", "seed", run_seed);
            cs.fill("--root", "root", run_root);
            cs.fill("--prune-factor", "prune_factor", run_prune);
            cs.fill("--bin-width-um", "bin_width_um", run_bin);
            cs.fill("--fit-dmin", "fit_dmin", run_dmin);
            cs.fill("--fit-dmax", "fit_dmax", run_dmax);
            require_set(run_input, "--input");
            require_set(run_prefix, "--out-prefix");

            Manifest man;
            man.subcommand = "run";
            stage = "read";
            const auto vol = read_volume(run_input);
            man.hash_input("input", run_input);
            man.stage_done("read");

            stage = "segment";
            GrowParams vp;
            vp.lo = run_lo;
            vp.hi = run_hi;
            vp.conn = conn_from_int(run_conn);
            vp.seed = run_seed.empty() ? auto_seed(vol, vp.lo, vp.hi)
                                       : to_voxel(run_seed, "--seed");
            const auto vessel = region_grow(vol, vp);
            write_mask(vessel, run_prefix + "_vessel.json");
            std::optional<BinaryMask> tissue;
            if (!run_no_tissue) {
                GrowParams tp;
                tp.lo = run_tlo;
                tp.hi = run_thi;
                tp.conn = conn_from_int(run_tconn);
                tp.seed = auto_seed(vol, tp.lo, tp.hi);
                tissue = region_grow(vol, tp);
                write_mask(*tissue, run_prefix + "_tissue.json");
            }
            man.stage_done("segment");

            stage = "skeletonize";
            const auto skel = thin(vessel);
            write_mask(skel.mask, run_prefix + "_skeleton.json");
            man.stage_done("skeletonize");

            stage = "tree";
            const auto edt = lumen_edt(vessel);
            const VoxelIndex root =
                run_root.empty() ? auto_root(skel, edt) : to_voxel(run_root, "--root");
            auto tree = measure(root_tree(build_graph(skel), root, &edt), edt);
            const std::size_t before = tree.segments.size();
            if (run_prune > 0.0) tree = prune(tree, edt, run_prune);
            write_segments_csv(run_prefix + "_segments.csv", tree);
            man.warnings["cycles_broken"] = tree.broken_cycle_edges.size();
            man.warnings["segments_pruned"] = before - tree.segments.size();
            man.stage_done("tree");

            stage = "stats";
            std::optional<std::pair<double, double>> window;
            if (run_dmin >= 0.0 && run_dmax > run_dmin) window = {{run_dmin, run_dmax}};
            emit_stats(tree, run_prefix, window);
            man.stage_done("stats");

            stage = "maps";
            write_volume(local_diameter_map(vessel, skel), run_prefix + "_diam.json", "f32");
            if (tissue) {
                const auto perf = perfusion_map(*tissue, vessel);
                write_volume(perf, run_prefix + "_perf.json", "f32");
                write_hist_csv(run_prefix + "_perf_hist.csv",
                               perfusion_histogram(perf, run_bin));
            }
            man.stage_done("maps");

            man.config = {{"lo", run_lo},
                          {"hi", std::isfinite(run_hi) ? json(run_hi) : json(nullptr)},
                          {"conn", run_conn},
                          {"tissue_lo", run_tlo},
                          {"tissue_hi", run_thi},
                          {"tissue_conn", run_tconn},
                          {"seed", {vp.seed.i, vp.seed.j, vp.seed.k}},
                          {"root", {root.i, root.j, root.k}},
                          {"prune_factor", run_prune},
                          {"bin_width_um", run_bin}};
            man.write(run_prefix + "_manifest.json", version);
        }
    } catch (const std::exception& e) {
        std::cerr << "vasctree: [" << stage << "] " << e.what() << "\n";
        return 1;
    }
    return 0;
}
