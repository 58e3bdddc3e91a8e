#pragma once

// Sampled directed Hausdorff distance between sets of polylines.
// The A side is sampled at arc pitch delta (vertices included), the B side
// is measured exactly with point-to-segment distance, so the result
// underestimates the exact value by at most delta/2.

#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/geom.hpp"
#include "mapcons/spatial_grid.hpp"

namespace mapcons {

inline SegmentGrid build_segment_grid(std::span<const PolyLine> lines, double cell = 0.0) {
    std::vector<SegmentRef> segs;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& pts = lines[li].points();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            segs.push_back({li, i, pts[i], pts[i + 1]});
    }
    return SegmentGrid(std::move(segs), cell);
}

inline double directed_hausdorff(std::span<const PolyLine> a, std::span<const PolyLine> b,
                                 double delta = 1.0) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("directed_hausdorff: empty polyline set");
    if (delta <= 0) throw std::invalid_argument("directed_hausdorff: delta must be > 0");
    SegmentGrid grid = build_segment_grid(b);
    double worst = 0.0;
    for (const PolyLine& line : a)
        for (Point p : line.sample_points(delta)) {
            auto hit = grid.nearest(p);
            if (hit.distance > worst) worst = hit.distance;
        }
    return worst;
}

inline double directed_hausdorff(const PolyLine& a, const PolyLine& b, double delta = 1.0) {
    std::vector<PolyLine> va{a}, vb{b};
    return directed_hausdorff(std::span<const PolyLine>(va), std::span<const PolyLine>(vb), delta);
}

}  // namespace mapcons
