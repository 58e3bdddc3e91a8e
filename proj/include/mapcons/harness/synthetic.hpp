#pragma once

// Synthetic ground truth: a rows x cols grid graph plus noisy constant-speed
// tracks along random boundary-to-boundary shortest paths. Grid corners are
// always sampled so that noise-free tracks lie exactly on the graph.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/graph_paths.hpp"
#include "mapcons/rng.hpp"
#include "mapcons/track.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

struct SyntheticSpec {
    int rows = 3;
    int cols = 3;
    double spacing_m = 500.0;
    std::size_t n_tracks = 200;
    double noise_sigma_m = 0.0;
    double dt_s = 3.0;
    double speed_kmh = 30.0;
    std::uint64_t seed = 1;
};

struct SyntheticCity {
    RoadGraph graph;
    std::vector<Track> tracks;
    std::set<VertexId> turned_at;  // grid vertices where some track changes direction
};

inline RoadGraph make_grid_graph(int rows, int cols, double spacing) {
    RoadGraph g;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g.add_vertex(static_cast<VertexId>(r) * cols + c, {c * spacing, r * spacing});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            VertexId id = static_cast<VertexId>(r) * cols + c;
            if (c + 1 < cols) g.add_edge(id, id + 1);
            if (r + 1 < rows) g.add_edge(id, id + cols);
        }
    return g;
}

inline SyntheticCity gen_synthetic(const SyntheticSpec& spec) {
    if (spec.rows < 2 || spec.cols < 2)
        throw std::invalid_argument("gen_synthetic: rows and cols must be >= 2");
    if (spec.spacing_m <= 0 || spec.dt_s <= 0 || spec.speed_kmh <= 0)
        throw std::invalid_argument("gen_synthetic: spacing, dt and speed must be > 0");

    SyntheticCity city;
    city.graph = make_grid_graph(spec.rows, spec.cols, spec.spacing_m);

    std::vector<VertexId> boundary;
    for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c)
            if (r == 0 || c == 0 || r == spec.rows - 1 || c == spec.cols - 1)
                boundary.push_back(static_cast<VertexId>(r) * spec.cols + c);

    Rng rng(spec.seed);
    const double speed = spec.speed_kmh / 3.6;  // m/s
    for (std::size_t k = 0; k < spec.n_tracks; ++k) {
        VertexId s = boundary[uniform_index(rng, boundary.size())];
        VertexId t = s;
        while (t == s) t = boundary[uniform_index(rng, boundary.size())];
        auto route = shortest_path(city.graph, s, t);
        if (!route || route->points.size() < 2) continue;

        PolyLine line(route->points);
        const auto& cum = line.cumulative();
        // Mark interior route vertices where the direction changes.
        {
            VertexId at = s;
            std::vector<VertexId> vseq{s};
            std::map<EdgeId, const RoadEdge*> by_id;
            for (const auto& e : city.graph.edges()) by_id[e.id] = &e;
            for (const auto& st : route->steps) {
                const RoadEdge* e = by_id.at(st.edge);
                at = st.forward ? e->v : e->u;
                vseq.push_back(at);
            }
            for (std::size_t i = 1; i + 1 < vseq.size(); ++i) {
                Point a = city.graph.vertex(vseq[i - 1]);
                Point b = city.graph.vertex(vseq[i]);
                Point c = city.graph.vertex(vseq[i + 1]);
                if (abs_heading_diff_deg(bearing_deg(a, b), bearing_deg(b, c)) > 1.0)
                    city.turned_at.insert(vseq[i]);
            }
        }

        std::vector<double> arcs = cum;  // corners
        for (double a = 0.0; a < line.length(); a += speed * spec.dt_s) arcs.push_back(a);
        arcs.push_back(line.length());
        std::sort(arcs.begin(), arcs.end());

        Track track;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%05zu", k);
        track.id = buf;
        double last = -1.0;
        for (double a : arcs) {
            if (a - last < 1e-9) continue;
            last = a;
            Point p = line.point_at(a);
            if (spec.noise_sigma_m > 0) {
                p.x += normal(rng, 0, spec.noise_sigma_m);
                p.y += normal(rng, 0, spec.noise_sigma_m);
            }
            track.measurements.push_back({p, a / speed, {}, {}});
        }
        if (track.measurements.size() >= 2) city.tracks.push_back(std::move(track));
    }
    return city;
}

}  // namespace mapcons
