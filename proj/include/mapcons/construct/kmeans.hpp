#pragma once

// Seeded k-means construction: cluster centers are seeded at fixed arc-length
// spacing along each track, measurements are assigned to the nearest center
// with a compatible heading, centers are re-fit to assignment fixpoint,
// nearby same-direction centers are merged, and edges connect consecutive
// clusters visited by any track.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/spatial_grid.hpp"
#include "mapcons/track.hpp"

namespace mapcons {

namespace kmeans_detail {

struct Center {
    Point pos;
    double heading = 0;
};

inline double circular_mean_deg(const std::vector<double>& headings) {
    double sx = 0, sy = 0;
    for (double h : headings) {
        sx += std::sin(h * M_PI / 180.0);
        sy += std::cos(h * M_PI / 180.0);
    }
    double deg = std::atan2(sx, sy) * 180.0 / M_PI;
    if (deg < 0) deg += 360.0;
    return deg;
}

inline SegmentGrid center_grid(const std::vector<Center>& centers, double cell) {
    std::vector<SegmentRef> segs;
    segs.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i)
        segs.push_back({i, 0, centers[i].pos, centers[i].pos});
    return SegmentGrid(std::move(segs), cell);
}

}  // namespace kmeans_detail

inline RoadGraph construct_kmeans(std::span<const Track> tracks, double seed_spacing_m = 50.0,
                                  double bearing_deg_tol = 45.0, double merge_proximity_m = 50.0) {
    if (tracks.empty()) throw std::invalid_argument("construct_kmeans: no tracks");
    if (seed_spacing_m <= 0 || merge_proximity_m <= 0)
        throw std::invalid_argument("construct_kmeans: spacings must be > 0");

    using kmeans_detail::Center;

    std::vector<Track> derived;
    derived.reserve(tracks.size());
    for (const auto& t : tracks)
        if (t.measurements.size() >= 2) derived.push_back(derive_kinematics(t));

    // Seed centers every seed_spacing of arc length along each track.
    std::vector<Center> centers;
    for (const auto& t : derived) {
        auto pts = t.points();
        std::vector<Point> clean;
        for (Point p : pts)
            if (clean.empty() || dist2(clean.back(), p) > 0) clean.push_back(p);
        if (clean.size() < 2) continue;
        PolyLine line(clean);
        for (double arc = seed_spacing_m / 2; arc < line.length(); arc += seed_spacing_m) {
            Point a = line.point_at(std::max(0.0, arc - 1.0));
            Point b = line.point_at(std::min(line.length(), arc + 1.0));
            centers.push_back({line.point_at(arc), bearing_deg(a, b)});
        }
    }
    if (centers.empty()) return RoadGraph{};

    struct Obs {
        Point pos;
        double heading;
        std::size_t track, order;
    };
    std::vector<Obs> obs;
    for (std::size_t ti = 0; ti < derived.size(); ++ti)
        for (std::size_t mi = 0; mi < derived[ti].measurements.size(); ++mi) {
            const auto& m = derived[ti].measurements[mi];
            if (m.heading) obs.push_back({m.point, *m.heading, ti, mi});
        }

    std::vector<long> assign(obs.size(), -1);
    for (int iter = 0; iter < 50; ++iter) {
        SegmentGrid grid = kmeans_detail::center_grid(centers, seed_spacing_m);
        std::vector<long> next(obs.size(), -1);
        for (std::size_t oi = 0; oi < obs.size(); ++oi) {
            double best = std::numeric_limits<double>::infinity();
            long pick = -1;
            for (double radius = seed_spacing_m;; radius *= 2) {
                for (std::size_t si : grid.candidates_within(obs[oi].pos, radius)) {
                    const Center& c = centers[grid.segments()[si].owner];
                    if (abs_heading_diff_deg(obs[oi].heading, c.heading) > bearing_deg_tol)
                        continue;
                    double d = dist(obs[oi].pos, c.pos);
                    if (d < best) {
                        best = d;
                        pick = static_cast<long>(grid.segments()[si].owner);
                    }
                }
                if (pick >= 0 && best <= radius) break;
                if (radius > 16 * seed_spacing_m && pick >= 0) break;
                if (radius > 1e7) break;
            }
            next[oi] = pick;
        }
        bool stable = next == assign;
        assign = std::move(next);
        if (stable) break;

        std::vector<Point> sums(centers.size(), {0, 0});
        std::vector<std::vector<double>> headings(centers.size());
        std::vector<std::size_t> counts(centers.size(), 0);
        for (std::size_t oi = 0; oi < obs.size(); ++oi) {
            if (assign[oi] < 0) continue;
            auto ci = static_cast<std::size_t>(assign[oi]);
            sums[ci] = sums[ci] + obs[oi].pos;
            headings[ci].push_back(obs[oi].heading);
            ++counts[ci];
        }
        for (std::size_t ci = 0; ci < centers.size(); ++ci)
            if (counts[ci] > 0) {
                centers[ci].pos = sums[ci] * (1.0 / static_cast<double>(counts[ci]));
                centers[ci].heading = kmeans_detail::circular_mean_deg(headings[ci]);
            }
    }

    // Drop empty clusters.
    std::vector<long> remap(centers.size(), -1);
    std::vector<Center> live;
    {
        std::vector<char> has(centers.size(), 0);
        for (long a : assign)
            if (a >= 0) has[static_cast<std::size_t>(a)] = 1;
        for (std::size_t ci = 0; ci < centers.size(); ++ci)
            if (has[ci]) {
                remap[ci] = static_cast<long>(live.size());
                live.push_back(centers[ci]);
            }
    }
    for (long& a : assign)
        if (a >= 0) a = remap[static_cast<std::size_t>(a)];

    // Merge centers closer than merge_proximity with compatible heading.
    // Mutual-nearest pairs merge per round; transitive single-link chaining
    // would collapse whole streets into one center.
    std::vector<std::size_t> final_of(live.size());
    std::iota(final_of.begin(), final_of.end(), 0);
    std::vector<std::size_t> weight(live.size(), 1);
    std::vector<char> dead(live.size(), 0);
    for (int round = 0; round < 10; ++round) {
        SegmentGrid lgrid = kmeans_detail::center_grid(live, merge_proximity_m);
        std::vector<long> nearest(live.size(), -1);
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (dead[i]) continue;
            double best = merge_proximity_m;
            for (std::size_t si : lgrid.candidates_within(live[i].pos, merge_proximity_m)) {
                std::size_t j = lgrid.segments()[si].owner;
                if (j == i || dead[j]) continue;
                double d = dist(live[i].pos, live[j].pos);
                if (d >= best) continue;
                if (abs_heading_diff_deg(live[i].heading, live[j].heading) > bearing_deg_tol)
                    continue;
                best = d;
                nearest[i] = static_cast<long>(j);
            }
        }
        bool merged_any = false;
        for (std::size_t i = 0; i < live.size(); ++i) {
            long j = nearest[i];
            if (j < 0 || static_cast<std::size_t>(j) < i) continue;
            if (nearest[static_cast<std::size_t>(j)] != static_cast<long>(i)) continue;
            auto ji = static_cast<std::size_t>(j);
            double wi = static_cast<double>(weight[i]), wj = static_cast<double>(weight[ji]);
            live[i].pos = (live[i].pos * wi + live[ji].pos * wj) * (1.0 / (wi + wj));
            live[i].heading =
                kmeans_detail::circular_mean_deg({live[i].heading, live[ji].heading});
            weight[i] += weight[ji];
            dead[ji] = 1;
            for (std::size_t k = 0; k < final_of.size(); ++k)
                if (final_of[k] == ji) final_of[k] = i;
            merged_any = true;
        }
        if (!merged_any) break;
    }

    RoadGraph g;
    std::vector<VertexId> cluster_vertex(live.size());
    for (std::size_t i = 0; i < live.size(); ++i)
        if (!dead[i]) cluster_vertex[i] = g.add_vertex(live[i].pos);
    for (std::size_t i = 0; i < live.size(); ++i)
        cluster_vertex[i] = cluster_vertex[final_of[i]];

    // Edges between consecutive clusters along each track.
    std::set<std::pair<VertexId, VertexId>> edges;
    std::map<std::pair<std::size_t, std::size_t>, long> by_order;
    for (std::size_t oi = 0; oi < obs.size(); ++oi)
        by_order[{obs[oi].track, obs[oi].order}] = assign[oi];
    for (std::size_t ti = 0; ti < derived.size(); ++ti) {
        long prev = -1;
        for (std::size_t mi = 0; mi < derived[ti].measurements.size(); ++mi) {
            auto it = by_order.find({ti, mi});
            if (it == by_order.end() || it->second < 0) continue;
            VertexId v = cluster_vertex[static_cast<std::size_t>(it->second)];
            if (prev >= 0 && v != static_cast<VertexId>(prev)) {
                VertexId a = std::min(static_cast<VertexId>(prev), v);
                VertexId b = std::max(static_cast<VertexId>(prev), v);
                if (edges.insert({a, b}).second && dist(g.vertex(a), g.vertex(b)) > 0)
                    g.add_edge(a, b);
            }
            prev = v;
        }
    }
    return g;
}

}  // namespace mapcons
