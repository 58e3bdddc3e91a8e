#pragma once

// Intersection-linking construction. Turns are detected where the heading
// changes by at least turn_angle at a speed at most speed_max; turns are
// clustered agglomeratively by turn type and spatial proximity; cluster
// centroids become intersection vertices; trajectories are split at the
// intersections they pass, and sub-trajectories connecting the same ordered
// vertex pair are bundled into an averaged link geometry.
//
// Robustness against measurement noise: bearings are taken over an arc-length
// window rather than single segments, a run of consecutive turn flags
// collapses to its strongest measurement, the speed gate uses a locally
// averaged speed, and clusters below a minimum support are discarded.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/spatial_grid.hpp"
#include "mapcons/track.hpp"

namespace mapcons {

struct Turn {
    std::size_t track = 0;
    std::size_t index = 0;   // measurement index
    Point pos{};
    double delta_deg = 0;    // signed heading change, right positive
    int type = 0;            // 8 compass sectors of the incoming heading x {left,right}
};

struct TraceBundleOptions {
    double turn_angle_deg = 15.0;
    double speed_max_kmh = 40.0;
    double proximity_m = 25.0;
    double bearing_window_m = 150.0;  // arc-length baseline for in/out bearings
    int min_cluster_support = 2;      // singleton turn clusters are noise
};

inline std::vector<Turn> detect_turns(const Track& raw, std::size_t track_idx,
                                      const TraceBundleOptions& opt) {
    std::vector<Turn> flagged;
    if (raw.measurements.size() < 3) return flagged;
    Track track = derive_kinematics(raw);
    const auto& ms = track.measurements;
    const std::size_t n = ms.size();

    std::vector<double> arc(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        arc[i] = arc[i - 1] + dist(ms[i - 1].point, ms[i].point);

    auto window_speed = [&](std::size_t i) {
        double sum = 0;
        int cnt = 0;
        std::size_t lo = i >= 2 ? i - 2 : 0;
        std::size_t hi = std::min(n - 1, i + 2);
        for (std::size_t k = lo; k <= hi; ++k)
            if (ms[k].speed) {
                sum += *ms[k].speed;
                ++cnt;
            }
        return cnt ? sum / cnt : 0.0;
    };

    for (std::size_t i = 1; i + 1 < n; ++i) {
        // Back/forward anchors at least bearing_window_m of arc away.
        std::size_t j = i;
        while (j > 0 && arc[i] - arc[j] < opt.bearing_window_m) --j;
        if (arc[i] - arc[j] < opt.bearing_window_m) continue;
        std::size_t k = i;
        while (k + 1 < n && arc[k] - arc[i] < opt.bearing_window_m) ++k;
        if (arc[k] - arc[i] < opt.bearing_window_m) continue;
        if (dist2(ms[j].point, ms[i].point) == 0 || dist2(ms[i].point, ms[k].point) == 0) continue;

        double in = bearing_deg(ms[j].point, ms[i].point);
        double out = bearing_deg(ms[i].point, ms[k].point);
        double delta = heading_diff_deg(in, out);
        if (std::abs(delta) < opt.turn_angle_deg) continue;
        if (window_speed(i) > opt.speed_max_kmh) continue;
        int sector = static_cast<int>(in / 45.0) % 8;
        flagged.push_back({track_idx, i, ms[i].point, delta, sector * 2 + (delta > 0 ? 1 : 0)});
    }

    // Collapse runs of consecutive flags to the strongest measurement.
    std::vector<Turn> turns;
    std::size_t s = 0;
    while (s < flagged.size()) {
        std::size_t e = s;
        while (e + 1 < flagged.size() && flagged[e + 1].index == flagged[e].index + 1) ++e;
        std::size_t best = s;
        for (std::size_t q = s; q <= e; ++q)
            if (std::abs(flagged[q].delta_deg) > std::abs(flagged[best].delta_deg)) best = q;
        turns.push_back(flagged[best]);
        s = e + 1;
    }
    return turns;
}

struct TurnCluster {
    Point centroid{};
    int type = 0;
    std::vector<std::size_t> members;  // indices into the turn list
};

// Agglomerative clustering: repeatedly merge the closest pair of clusters of
// the same turn type with centroid distance <= proximity.
inline std::vector<TurnCluster> cluster_turns(std::span<const Turn> turns, double proximity_m) {
    std::vector<TurnCluster> clusters;
    for (std::size_t i = 0; i < turns.size(); ++i)
        clusters.push_back({turns[i].pos, turns[i].type, {i}});

    for (;;) {
        double best = proximity_m;
        std::size_t bi = clusters.size(), bj = clusters.size();
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                if (clusters[i].type != clusters[j].type) continue;
                double d = dist(clusters[i].centroid, clusters[j].centroid);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        if (bi == clusters.size()) break;
        auto& a = clusters[bi];
        auto& b = clusters[bj];
        double na = static_cast<double>(a.members.size());
        double nb = static_cast<double>(b.members.size());
        a.centroid = (a.centroid * na + b.centroid * nb) * (1.0 / (na + nb));
        a.members.insert(a.members.end(), b.members.begin(), b.members.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return clusters;
}

inline RoadGraph construct_tracebundle(std::span<const Track> tracks,
                                       const TraceBundleOptions& opt = {},
                                       std::vector<std::string>* warnings = nullptr) {
    if (tracks.empty()) throw std::invalid_argument("construct_tracebundle: no tracks");

    std::vector<Turn> turns;
    for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
        auto t = detect_turns(tracks[ti], ti, opt);
        turns.insert(turns.end(), t.begin(), t.end());
    }
    auto clusters = cluster_turns(turns, opt.proximity_m);
    clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                  [&](const TurnCluster& c) {
                                      return static_cast<int>(c.members.size()) <
                                             opt.min_cluster_support;
                                  }),
                   clusters.end());

    RoadGraph g;
    if (clusters.empty()) {
        if (warnings)
            warnings->push_back("no intersections detected; emitting through-trajectory chains");
        for (const auto& t : tracks) {
            auto pts = t.points();
            std::vector<Point> clean;
            for (Point p : pts)
                if (clean.empty() || dist2(clean.back(), p) > 0) clean.push_back(p);
            if (clean.size() < 2) continue;
            VertexId a = g.add_vertex(clean.front());
            VertexId b = g.add_vertex(clean.back());
            g.add_edge(a, b, PolyLine(clean));
        }
        return g;
    }

    std::vector<VertexId> cluster_vertex;
    std::vector<SegmentRef> vsegs;
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        VertexId vid = g.add_vertex(clusters[ci].centroid);
        cluster_vertex.push_back(vid);
        vsegs.push_back({ci, 0, clusters[ci].centroid, clusters[ci].centroid});
    }
    SegmentGrid vgrid(std::move(vsegs), opt.proximity_m);

    // Split each trajectory at the intersections it passes and bundle
    // sub-trajectories by ordered vertex pair.
    std::map<std::pair<VertexId, VertexId>, std::vector<std::vector<Point>>> bundles;
    for (const auto& t : tracks) {
        const auto& ms = t.measurements;
        struct Visit {
            std::size_t index;
            VertexId vertex;
        };
        std::vector<Visit> visits;
        long active_cluster = -1;
        std::size_t active_best = 0;
        double active_dist = 0;
        auto flush = [&]() {
            if (active_cluster >= 0)
                visits.push_back({active_best, cluster_vertex[static_cast<std::size_t>(
                                                   active_cluster)]});
            active_cluster = -1;
        };
        for (std::size_t mi = 0; mi < ms.size(); ++mi) {
            long nearest = -1;
            double nd = opt.proximity_m;
            for (std::size_t si : vgrid.candidates_within(ms[mi].point, opt.proximity_m)) {
                std::size_t ci = vgrid.segments()[si].owner;
                double d = dist(ms[mi].point, clusters[ci].centroid);
                if (d <= nd) {
                    nd = d;
                    nearest = static_cast<long>(ci);
                }
            }
            if (nearest != active_cluster) {
                flush();
                active_cluster = nearest;
                active_best = mi;
                active_dist = nd;
            } else if (nearest >= 0 && nd < active_dist) {
                active_dist = nd;
                active_best = mi;
            }
        }
        flush();

        for (std::size_t vi = 0; vi + 1 < visits.size(); ++vi) {
            const auto& a = visits[vi];
            const auto& b = visits[vi + 1];
            if (a.vertex == b.vertex) continue;
            std::vector<Point> sub;
            for (std::size_t mi = a.index; mi <= b.index; ++mi) sub.push_back(ms[mi].point);
            if (sub.size() < 2 || polyline_length(sub) <= 0) continue;
            bundles[{a.vertex, b.vertex}].push_back(std::move(sub));
        }
    }

    for (const auto& [key, subs] : bundles) {
        // Average the bundle pointwise after arc-length-uniform resampling.
        constexpr std::size_t kSamples = 32;
        std::vector<Point> avg(kSamples, {0, 0});
        std::size_t used = 0;
        for (const auto& sub : subs) {
            PolyLine line(sub);
            auto pts = resample_uniform(line, kSamples);
            for (std::size_t i = 0; i < kSamples; ++i) avg[i] = avg[i] + pts[i];
            ++used;
        }
        if (used == 0) continue;
        for (auto& p : avg) p = p * (1.0 / static_cast<double>(used));
        std::vector<Point> geom{g.vertex(key.first)};
        geom.insert(geom.end(), avg.begin(), avg.end());
        geom.push_back(g.vertex(key.second));
        if (polyline_length(geom) <= 0) continue;
        g.add_edge(key.first, key.second, PolyLine(std::move(geom)));
    }
    return g;
}

}  // namespace mapcons
