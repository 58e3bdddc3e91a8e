#pragma once

// Undirected geometric street-map model: embedded vertices, polyline edges.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcons/geom.hpp"
#include "mapcons/spatial_grid.hpp"

namespace mapcons {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;

struct RoadEdge {
    EdgeId id = 0;
    VertexId u = 0;
    VertexId v = 0;
    PolyLine geometry;  // first/last points equal the embedded endpoints
};

class RoadGraph {
public:
    const std::map<VertexId, Point>& vertices() const { return vertices_; }
    const std::vector<RoadEdge>& edges() const { return edges_; }
    bool empty() const { return vertices_.empty() && edges_.empty(); }

    bool has_vertex(VertexId id) const { return vertices_.count(id) > 0; }

    Point vertex(VertexId id) const {
        auto it = vertices_.find(id);
        if (it == vertices_.end())
            throw std::invalid_argument("RoadGraph: unknown vertex id " + std::to_string(id));
        return it->second;
    }

    void add_vertex(VertexId id, Point p) {
        auto [it, inserted] = vertices_.emplace(id, p);
        if (!inserted)
            throw std::invalid_argument("RoadGraph: duplicate vertex id " + std::to_string(id));
        adjacency_.clear();
    }

    VertexId add_vertex(Point p) {
        VertexId id = vertices_.empty() ? 0 : vertices_.rbegin()->first + 1;
        vertices_.emplace(id, p);
        adjacency_.clear();
        return id;
    }

    void move_vertex(VertexId id, Point p) {
        vertices_.at(id) = p;
        adjacency_.clear();
    }

    EdgeId add_edge(VertexId u, VertexId v, PolyLine geometry, std::optional<EdgeId> want = {}) {
        EdgeId id = want ? *want : next_edge_id_;
        edges_.push_back({id, u, v, std::move(geometry)});
        next_edge_id_ = std::max(next_edge_id_, id + 1);
        adjacency_.clear();
        return id;
    }

    // Straight edge between two embedded vertices.
    EdgeId add_edge(VertexId u, VertexId v) {
        return add_edge(u, v, PolyLine({vertex(u), vertex(v)}));
    }

    void remove_edge(EdgeId id) {
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].id == id) {
                edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(i));
                adjacency_.clear();
                return;
            }
        throw std::invalid_argument("RoadGraph: unknown edge id " + std::to_string(id));
    }

    // Incident (edge index, true when this vertex is the edge's u side).
    const std::vector<std::pair<std::size_t, bool>>& incident(VertexId v) const {
        build_adjacency();
        static const std::vector<std::pair<std::size_t, bool>> none;
        auto it = adjacency_.find(v);
        return it == adjacency_.end() ? none : it->second;
    }

    std::size_t degree(VertexId v) const { return incident(v).size(); }

    double total_length() const {
        double len = 0;
        for (const auto& e : edges_) len += e.geometry.length();
        return len;
    }

private:
    void build_adjacency() const {
        if (!adjacency_.empty() || edges_.empty()) return;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            adjacency_[edges_[i].u].push_back({i, true});
            adjacency_[edges_[i].v].push_back({i, false});
        }
    }

    std::map<VertexId, Point> vertices_;
    std::vector<RoadEdge> edges_;
    EdgeId next_edge_id_ = 0;
    mutable std::map<VertexId, std::vector<std::pair<std::size_t, bool>>> adjacency_;
};

struct Violation {
    std::string rule;
    std::int64_t id = 0;   // offending vertex or edge id
    std::string detail;
};

inline std::vector<Violation> validate_graph(const RoadGraph& g) {
    std::vector<Violation> out;
    constexpr double kEmbedTol = 1e-6;
    std::map<EdgeId, int> edge_ids;
    for (const auto& e : g.edges()) {
        if (++edge_ids[e.id] == 2)
            out.push_back({"duplicate-edge-id", e.id, "edge id appears more than once"});
        bool have_u = g.has_vertex(e.u), have_v = g.has_vertex(e.v);
        if (!have_u)
            out.push_back({"dangling-endpoint", e.id, "missing vertex " + std::to_string(e.u)});
        if (!have_v)
            out.push_back({"dangling-endpoint", e.id, "missing vertex " + std::to_string(e.v)});
        if (e.geometry.size() < 2 || e.geometry.length() <= 0) {
            out.push_back({"degenerate-geometry", e.id, "zero-length edge geometry"});
            continue;
        }
        if (have_u && dist(e.geometry.front(), g.vertex(e.u)) > kEmbedTol)
            out.push_back({"geometry-mismatch", e.id,
                           "geometry start is not at vertex " + std::to_string(e.u)});
        if (have_v && dist(e.geometry.back(), g.vertex(e.v)) > kEmbedTol)
            out.push_back({"geometry-mismatch", e.id,
                           "geometry end is not at vertex " + std::to_string(e.v)});
    }
    return out;
}

struct GraphStats {
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    double total_length_km = 0.0;
};

// Degree-2 vertices are counted like any other.
inline GraphStats graph_stats(const RoadGraph& g) {
    return {g.vertices().size(), g.edges().size(), g.total_length() / 1000.0};
}

// Vertex minimizing Euclidean distance to p; ties break to the smaller id.
inline VertexId nearest_vertex(const RoadGraph& g, Point p) {
    if (g.vertices().empty())
        throw std::invalid_argument("nearest_vertex: empty graph");
    VertexId best = g.vertices().begin()->first;
    double best_d = dist2(p, g.vertices().begin()->second);
    for (const auto& [id, pos] : g.vertices()) {
        double d = dist2(p, pos);
        if (d < best_d) {
            best = id;
            best_d = d;
        }
    }
    return best;
}

inline std::vector<PolyLine> edge_polylines(const RoadGraph& g) {
    std::vector<PolyLine> out;
    out.reserve(g.edges().size());
    for (const auto& e : g.edges()) out.push_back(e.geometry);
    return out;
}

inline SegmentGrid edge_segment_grid(const RoadGraph& g, double cell = 0.0) {
    std::vector<SegmentRef> segs;
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
        const auto& pts = g.edges()[ei].geometry.points();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            segs.push_back({ei, i, pts[i], pts[i + 1]});
    }
    return SegmentGrid(std::move(segs), cell);
}

inline BBox graph_bbox(const RoadGraph& g) {
    BBox b;
    for (const auto& [id, p] : g.vertices()) b.add(p);
    for (const auto& e : g.edges())
        for (Point p : e.geometry.points()) b.add(p);
    return b;
}

}  // namespace mapcons
