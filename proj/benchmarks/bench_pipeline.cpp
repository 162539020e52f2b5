// Micro-benchmarks for the hot kernels of the morphometry pipeline: the
// distance transform, topology-preserving thinning, seeded region growing,
// and centerline graph extraction.  Inputs are synthetic vessel phantoms so
// the workload matches real use (sparse tubular foreground, ~1-5% fill).
#include <benchmark/benchmark.h>

#include <cstdint>

#include "vasc/distance.hpp"
#include "vasc/phantom.hpp"
#include "vasc/segmentation.hpp"
#include "vasc/skeleton.hpp"
#include "vasc/tree.hpp"
#include "vasc/volume.hpp"

namespace {

using namespace vasc;

// 128^3 grids fit a G=3 tree with a 200um root, 192^3 a G=4 with 240um.
GroundTruth phantom_truth(int n) {
    PhantomSpec spec;
    spec.generations = n >= 192 ? 4 : 3;
    spec.root_diameter_um = n >= 192 ? 240.0 : 200.0;
    spec.root_length_um = 900.0;
    return generate(spec);
}

BinaryMask phantom_lumen(int n) {
    return rasterize_lumen(phantom_truth(n), Dims{n, n, n}, Spacing{20.0, 20.0, 20.0});
}

BinaryMask background_of(const BinaryMask& m) {
    BinaryMask bg(m.grid);
    for (std::size_t p = 0; p < m.grid.size(); ++p)
        bg.membership[p] = m.membership[p] ? 0 : 1;
    return bg;
}

void BM_DistanceTransform(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto bg = background_of(phantom_lumen(n));
    for (auto _ : state) {
        auto edt = distance_transform(bg);
        benchmark::DoNotOptimize(edt.dist2.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(bg.grid.size()));
}
BENCHMARK(BM_DistanceTransform)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_Thin(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto lumen = phantom_lumen(n);
    for (auto _ : state) {
        auto skel = thin(lumen);
        benchmark::DoNotOptimize(skel.mask.membership.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(lumen.grid.size()));
}
BENCHMARK(BM_Thin)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_RegionGrow(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto gt = phantom_truth(n);
    const Dims dims{n, n, n};
    const Spacing sp{20.0, 20.0, 20.0};
    const auto vol = rasterize(gt, dims, sp);
    const auto info = raster_info(gt, dims, sp, 0.0);
    const auto lumen = rasterize_lumen(gt, dims, sp);
    const VoxelIndex seed = root_seed(gt, info, lumen);
    for (auto _ : state) {
        auto mask = region_grow(vol, vessel_preset(seed));
        benchmark::DoNotOptimize(mask.membership.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(vol.grid.size()));
}
BENCHMARK(BM_RegionGrow)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto skel = thin(phantom_lumen(n));
    for (auto _ : state) {
        auto graph = build_graph(skel);
        benchmark::DoNotOptimize(graph.edges.data());
    }
}
BENCHMARK(BM_BuildGraph)->Arg(128)->Arg(192)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
