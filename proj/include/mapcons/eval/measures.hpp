#pragma once

// Directed Hausdorff between graphs (with per-edge signatures) and the
// Average Vertical distance between path polylines.

#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/geom.hpp"
#include "mapcons/graph.hpp"
#include "mapcons/hausdorff.hpp"

namespace mapcons {

struct HausdorffReport {
    double max_m = 0.0;
    std::vector<std::pair<EdgeId, double>> per_edge;  // per-edge directed Hausdorff
};

// Directed Hausdorff from C's covered point set to G's, sampled at pitch
// delta on the C side. The per-edge signature is each edge's own value.
inline HausdorffReport eval_directed_hausdorff(const RoadGraph& c, const RoadGraph& g,
                                               double delta = 1.0) {
    if (c.edges().empty() || g.edges().empty())
        throw std::invalid_argument("eval_directed_hausdorff: empty graph");
    if (delta <= 0) throw std::invalid_argument("eval_directed_hausdorff: delta must be > 0");
    SegmentGrid grid = edge_segment_grid(g);
    HausdorffReport report;
    for (const auto& e : c.edges()) {
        double worst = 0.0;
        for (Point p : e.geometry.sample_points(delta)) {
            auto hit = grid.nearest(p);
            if (hit.distance > worst) worst = hit.distance;
        }
        report.per_edge.push_back({e.id, worst});
        if (worst > report.max_m) report.max_m = worst;
    }
    return report;
}

namespace detail {

inline double one_sided_vertical(std::span<const Point> p, std::span<const Point> q,
                                 double delta) {
    std::vector<Point> samples;
    if (p.size() >= 2 && polyline_length(p) > 0)
        samples = PolyLine(std::vector<Point>(p.begin(), p.end())).sample_points(delta);
    else
        samples.push_back(p[0]);
    double sum = 0;
    for (Point s : samples) {
        if (q.size() >= 2 && polyline_length(q) > 0) sum += point_to_polyline_distance(s, q);
        else sum += dist(s, q[0]);
    }
    return sum / static_cast<double>(samples.size());
}

}  // namespace detail

// Mean nearest distance from P's delta-pitch samples to Q; one-sided by
// default, with the symmetric mean of both directions behind a flag (the
// cited definition leaves the sidedness open).
inline double average_vertical_distance(std::span<const Point> p, std::span<const Point> q,
                                        double delta = 1.0, bool symmetric = false) {
    if (p.empty() || q.empty())
        throw std::invalid_argument("average_vertical_distance: degenerate input");
    if (delta <= 0) throw std::invalid_argument("average_vertical_distance: delta must be > 0");
    double forward = detail::one_sided_vertical(p, q, delta);
    if (!symmetric) return forward;
    return 0.5 * (forward + detail::one_sided_vertical(q, p, delta));
}

inline double average_vertical_distance(const PolyLine& p, const PolyLine& q, double delta = 1.0,
                                        bool symmetric = false) {
    return average_vertical_distance(std::span<const Point>(p.points()),
                                     std::span<const Point>(q.points()), delta, symmetric);
}

}  // namespace mapcons
