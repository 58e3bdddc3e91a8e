#pragma once

// Incremental Fréchet track insertion. Each track is partially map-matched
// against the current graph at distance eps: the maximal sub-curves (at
// measurement granularity) admitting a monotone free-space passage are the
// matched portions; unmatched portions are inserted as new polyline edges,
// splitting existing edges at the attachment points.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/eval/surface.hpp"
#include "mapcons/graph.hpp"
#include "mapcons/track.hpp"

namespace mapcons {

namespace detail {

// Vertex at the given position on an edge, splitting it unless the position
// coincides with an endpoint.
inline VertexId anchor_vertex(RoadGraph& g, std::size_t edge_idx, std::size_t seg, double t) {
    const RoadEdge edge = g.edges()[edge_idx];  // copy; the edge may be removed below
    const auto& pts = edge.geometry.points();
    Point at = pts[seg] + (pts[seg + 1] - pts[seg]) * t;
    constexpr double kSnap = 1e-6;
    if (dist(at, g.vertex(edge.u)) <= kSnap) return edge.u;
    if (dist(at, g.vertex(edge.v)) <= kSnap) return edge.v;

    std::vector<Point> head(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(seg) + 1);
    head.push_back(at);
    std::vector<Point> tail{at};
    tail.insert(tail.end(), pts.begin() + static_cast<std::ptrdiff_t>(seg) + 1, pts.end());

    VertexId w = g.add_vertex(at);
    g.remove_edge(edge.id);
    g.add_edge(edge.u, w, PolyLine(std::move(head)));
    g.add_edge(w, edge.v, PolyLine(std::move(tail)));
    return w;
}

inline VertexId attach_at_nearest(RoadGraph& g, Point p) {
    SegmentGrid grid = edge_segment_grid(g);
    auto hit = grid.nearest(p);
    const auto& ref = grid.segments()[hit.index];
    return anchor_vertex(g, ref.owner, ref.seg, hit.t);
}

}  // namespace detail

// Maximal matched intervals of the point sequence, as inclusive index pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> matched_portions(
    const RoadGraph& g, std::span<const Point> pts, double eps) {
    std::vector<std::pair<std::size_t, std::size_t>> matched;
    if (g.edges().empty() || pts.size() < 2) return matched;
    GraphMatcher matcher(g);
    const std::size_t last = pts.size() - 1;
    std::size_t i = 0;
    auto ok = [&](std::size_t a, std::size_t b) {
        return matcher.decision(pts.subspan(a, b - a + 1), eps);
    };
    while (i < last) {
        if (!ok(i, i + 1)) {
            ++i;
            continue;
        }
        // Exponential then binary search for the farthest matchable index.
        std::size_t good = i + 1;
        std::size_t step = 1;
        while (good < last) {
            std::size_t probe = std::min(last, i + step * 2);
            if (!ok(i, probe)) break;
            good = probe;
            step *= 2;
        }
        std::size_t bad = std::min(last, i + step * 2);
        if (good < bad && !ok(i, bad)) {
            while (bad - good > 1) {
                std::size_t mid = (good + bad) / 2;
                if (ok(i, mid)) good = mid;
                else bad = mid;
            }
        }
        matched.push_back({i, good});
        i = good;
    }
    return matched;
}

inline RoadGraph construct_incremental_frechet(std::span<const Track> tracks, double eps) {
    if (tracks.empty())
        throw std::invalid_argument("construct_incremental_frechet: no tracks");
    if (eps <= 0) throw std::invalid_argument("construct_incremental_frechet: eps must be > 0");

    RoadGraph g;
    for (const auto& track : tracks) {
        std::vector<Point> raw = track.points();
        std::vector<Point> pts;
        for (Point p : raw)
            if (pts.empty() || dist2(pts.back(), p) > 0) pts.push_back(p);
        if (pts.size() < 2) continue;
        const std::size_t last = pts.size() - 1;

        auto matched = matched_portions(g, pts, eps);

        // Complement of the matched union. Gap endpoints are the matched
        // transition vertices; they become (or attach to) graph anchors.
        struct Gap {
            std::size_t from, to;
            bool attach_left, attach_right;
        };
        std::vector<Gap> gaps;
        if (matched.empty()) {
            gaps.push_back({0, last, false, false});
        } else {
            if (matched.front().first > 0) gaps.push_back({0, matched.front().first, false, true});
            for (std::size_t k = 0; k + 1 < matched.size(); ++k)
                if (matched[k + 1].first > matched[k].second)
                    gaps.push_back({matched[k].second, matched[k + 1].first, true, true});
            if (matched.back().second < last)
                gaps.push_back({matched.back().second, last, true, false});
        }

        for (const auto& gap : gaps) {
            std::vector<Point> geom;
            VertexId a, b;
            if (gap.attach_left) {
                a = detail::attach_at_nearest(g, pts[gap.from]);
                geom.push_back(g.vertex(a));
            } else {
                a = g.add_vertex(pts[gap.from]);
                geom.push_back(pts[gap.from]);
            }
            for (std::size_t i2 = gap.from; i2 <= gap.to; ++i2) geom.push_back(pts[i2]);
            if (gap.attach_right) {
                b = detail::attach_at_nearest(g, pts[gap.to]);
                geom.push_back(g.vertex(b));
            } else {
                b = g.add_vertex(pts[gap.to]);
            }
            try {
                g.add_edge(a, b, PolyLine(std::move(geom)));
            } catch (const std::invalid_argument&) {
                // degenerate geometry (all points coincide): skip
            }
        }
    }
    return g;
}

}  // namespace mapcons
