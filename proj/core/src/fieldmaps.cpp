#include "vasc/fieldmaps.hpp"

#include <algorithm>
#include <cmath>

#include "vasc/distance.hpp"
#include "vasc/errors.hpp"
#include "vasc/parallel.hpp"

namespace vasc {

namespace {

Volume3D masked_distance_map(const BinaryMask& domain, const BinaryMask& feature) {
    const DistanceField edt = distance_transform(feature, false);
    Volume3D map(domain.grid.dims, domain.grid.spacing, kMapSentinel);
    parallel_for(0, domain.grid.size(), [&](std::size_t p) {
        if (domain.membership[p]) map.values[p] = float(edt.distance_um(p));
    });
    return map;
}

} // namespace

Volume3D local_diameter_map(const BinaryMask& vessel, const Skeleton& skel) {
    if (!vessel.grid.same_grid(skel.mask.grid))
        throw GridMismatch("local_diameter_map: vessel and skeleton grids differ");
    return masked_distance_map(vessel, skel.mask);
}

Volume3D perfusion_map(const BinaryMask& tissue, const BinaryMask& vessel) {
    if (!tissue.grid.same_grid(vessel.grid))
        throw GridMismatch("perfusion_map: tissue and vessel grids differ");
    return masked_distance_map(tissue, vessel);
}

PerfusionHistogram perfusion_histogram(const Volume3D& map, double bin_width_um) {
    if (bin_width_um <= 0) throw InvalidParameter("perfusion_histogram: bin width must be positive");
    PerfusionHistogram h;
    h.bin_width_um = bin_width_um;
    std::size_t total = 0;
    for (const float v : map.values) {
        if (v < 0) continue;  // sentinel
        const std::size_t bin = std::size_t(double(v) / bin_width_um);
        if (bin >= h.counts.size()) h.counts.resize(bin + 1, 0);
        ++h.counts[bin];
        ++total;
    }
    h.bin_edges_um.resize(h.counts.size() + 1);
    for (std::size_t b = 0; b < h.bin_edges_um.size(); ++b)
        h.bin_edges_um[b] = double(b) * bin_width_um;
    h.freq.resize(h.counts.size());
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        h.freq[b] = total ? double(h.counts[b]) / double(total) : 0.0;
    return h;
}

SpecimenAggregate aggregate_specimens(const std::vector<PerfusionHistogram>& histograms) {
    if (histograms.empty())
        throw InvalidParameter("aggregate_specimens: need at least one histogram");
    const double w = histograms.front().bin_width_um;
    std::size_t bins = 0;
    for (const auto& h : histograms) {
        if (h.bin_width_um != w)
            throw GridMismatch("aggregate_specimens: histograms use different bin widths");
        bins = std::max(bins, h.counts.size());
    }
    SpecimenAggregate agg;
    agg.bin_width_um = w;
    agg.specimens = histograms.size();
    agg.bin_edges_um.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) agg.bin_edges_um[b] = double(b) * w;
    agg.mean_freq.assign(bins, 0.0);
    agg.std_freq.assign(bins, 0.0);
    for (std::size_t b = 0; b < bins; ++b) {
        double sum = 0.0;
        for (const auto& h : histograms) sum += b < h.freq.size() ? h.freq[b] : 0.0;
        agg.mean_freq[b] = sum / double(agg.specimens);
        if (agg.specimens > 1) {
            double ss = 0.0;
            for (const auto& h : histograms) {
                const double f = b < h.freq.size() ? h.freq[b] : 0.0;
                ss += (f - agg.mean_freq[b]) * (f - agg.mean_freq[b]);
            }
            agg.std_freq[b] = std::sqrt(ss / double(agg.specimens - 1));
        }
    }
    return agg;
}

} // namespace vasc
