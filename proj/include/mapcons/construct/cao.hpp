#pragma once

// Cao-style construction: a physical-attraction clarification pass that
// pulls heading-compatible measurements of different tracks together,
// followed by a local incremental insertion that merges measurements into
// nearby same-direction edges or grows new vertices and edges.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/spatial_grid.hpp"
#include "mapcons/track.hpp"

namespace mapcons {

// Iteratively displaces each measurement toward the distance-weighted
// centroid of nearby measurements from other tracks with compatible heading.
// The displacement factor decays as damping^(iteration+1), so separation
// shrinks without overshooting. Track and measurement counts are preserved.
inline std::vector<Track> clarify_tracks(std::span<const Track> tracks, double radius_m = 30.0,
                                         int iterations = 5, double damping = 0.5,
                                         double bearing_tol_deg = 45.0) {
    if (radius_m <= 0) throw std::invalid_argument("clarify_tracks: radius must be > 0");
    if (iterations < 1) throw std::invalid_argument("clarify_tracks: iterations must be >= 1");

    std::vector<Track> cur;
    cur.reserve(tracks.size());
    for (const auto& t : tracks) cur.push_back(derive_kinematics(t));

    struct Ref {
        std::size_t track, idx;
    };
    for (int it = 0; it < iterations; ++it) {
        double factor = std::pow(damping, it + 1);

        // point grid over all measurements
        std::vector<Ref> refs;
        std::vector<SegmentRef> segs;
        for (std::size_t ti = 0; ti < cur.size(); ++ti)
            for (std::size_t mi = 0; mi < cur[ti].measurements.size(); ++mi) {
                Point p = cur[ti].measurements[mi].point;
                segs.push_back({refs.size(), 0, p, p});
                refs.push_back({ti, mi});
            }
        SegmentGrid grid(std::move(segs), radius_m);

        std::vector<Track> next = cur;
        for (std::size_t ti = 0; ti < cur.size(); ++ti)
            for (std::size_t mi = 0; mi < cur[ti].measurements.size(); ++mi) {
                const auto& m = cur[ti].measurements[mi];
                if (!m.heading) continue;
                double wsum = 0;
                Point centroid{0, 0};
                for (std::size_t si : grid.candidates_within(m.point, radius_m)) {
                    const Ref& r = refs[grid.segments()[si].owner];
                    if (r.track == ti) continue;  // only other tracks attract
                    const auto& o = cur[r.track].measurements[r.idx];
                    double d = dist(m.point, o.point);
                    if (d > radius_m) continue;
                    if (!o.heading ||
                        abs_heading_diff_deg(*m.heading, *o.heading) > bearing_tol_deg)
                        continue;
                    double w = 1.0 - d / radius_m;
                    if (w <= 0) continue;
                    centroid = centroid + o.point * w;
                    wsum += w;
                }
                if (wsum <= 0) continue;
                centroid = centroid * (1.0 / wsum);
                Point disp = (centroid - m.point) * factor;
                next[ti].measurements[mi].point = m.point + disp;
            }
        cur = std::move(next);
    }
    return cur;
}

// Streams measurements track by track. A measurement within proximity of an
// edge built before the current track started, with heading within the
// bearing tolerance of that edge's construction direction, merges into it
// (mapped to the nearer endpoint, geometry unchanged). Otherwise it becomes
// a new vertex linked from the previous mapped location.
inline RoadGraph construct_incremental_local(std::span<const Track> tracks,
                                             double proximity_m = 20.0,
                                             double bearing_deg_tol = 45.0) {
    if (proximity_m <= 0)
        throw std::invalid_argument("construct_incremental_local: proximity must be > 0");

    RoadGraph g;
    std::vector<double> edge_bearing;  // by edge index, construction direction

    auto edge_exists = [&](VertexId a, VertexId b) {
        for (auto [ei, side] : g.incident(a)) {
            const auto& e = g.edges()[ei];
            if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return true;
        }
        return false;
    };

    for (const auto& raw : tracks) {
        if (raw.measurements.size() < 2) continue;
        Track track = derive_kinematics(raw);
        const std::size_t snapshot = g.edges().size();  // tracks never merge into themselves

        bool have_prev = false;
        VertexId prev = 0;
        for (const auto& m : track.measurements) {
            // merge test against the pre-track snapshot
            std::size_t best_edge = snapshot;
            double best_d = proximity_m;
            double best_t = 0;
            for (std::size_t ei = 0; ei < snapshot; ++ei) {
                if (!m.heading ||
                    abs_heading_diff_deg(*m.heading, edge_bearing[ei]) > bearing_deg_tol)
                    continue;
                const auto& pts = g.edges()[ei].geometry.points();
                double t;
                Point c = closest_point_on_segment(m.point, pts.front(), pts.back(), &t);
                double d = dist(m.point, c);
                if (d <= best_d) {
                    best_d = d;
                    best_edge = ei;
                    best_t = t;
                }
            }

            VertexId mapped;
            if (best_edge < snapshot) {
                const auto& e = g.edges()[best_edge];
                mapped = best_t <= 0.5 ? e.u : e.v;
            } else {
                mapped = g.add_vertex(m.point);
            }
            if (have_prev && mapped != prev && !edge_exists(prev, mapped)) {
                if (dist(g.vertex(prev), g.vertex(mapped)) > 0) {
                    g.add_edge(prev, mapped);
                    edge_bearing.push_back(bearing_deg(g.vertex(prev), g.vertex(mapped)));
                }
            }
            prev = mapped;
            have_prev = true;
        }
    }
    return g;
}

}  // namespace mapcons
