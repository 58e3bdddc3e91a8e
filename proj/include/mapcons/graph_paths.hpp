#pragma once

// Shortest paths (geometric length weights) and link-k path enumeration.
// A link is a maximal chain through degree-2 vertices.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "mapcons/graph.hpp"

namespace mapcons {

struct PathStep {
    EdgeId edge = 0;
    bool forward = true;  // traversed u -> v
};

struct GraphPath {
    VertexId start = 0;
    VertexId end = 0;
    std::vector<PathStep> steps;
    std::vector<Point> points;  // concatenated edge geometry (single point when empty path)
    double length = 0.0;
};

namespace detail {

inline void append_edge_points(std::vector<Point>& out, const RoadEdge& e, bool forward) {
    const auto& pts = e.geometry.points();
    if (forward) {
        for (std::size_t i = out.empty() ? 0 : 1; i < pts.size(); ++i) out.push_back(pts[i]);
    } else {
        std::size_t skip = out.empty() ? 0 : 1;
        for (std::size_t i = pts.size() - skip; i-- > 0;) out.push_back(pts[i]);
    }
}

struct CompactGraph {
    std::vector<VertexId> ids;                 // sorted
    std::map<VertexId, std::size_t> index;
    struct Arc {
        std::size_t to;
        double w;
        std::size_t edge;  // index into g.edges()
        bool forward;
    };
    std::vector<std::vector<Arc>> adj;

    explicit CompactGraph(const RoadGraph& g) {
        ids.reserve(g.vertices().size());
        for (const auto& [id, p] : g.vertices()) {
            index[id] = ids.size();
            ids.push_back(id);
        }
        adj.resize(ids.size());
        for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
            const auto& e = g.edges()[ei];
            double w = e.geometry.length();
            std::size_t ui = index.at(e.u), vi = index.at(e.v);
            adj[ui].push_back({vi, w, ei, true});
            if (vi != ui) adj[vi].push_back({ui, w, ei, false});
        }
        for (auto& list : adj)
            std::sort(list.begin(), list.end(), [&g](const Arc& a, const Arc& b) {
                return g.edges()[a.edge].id < g.edges()[b.edge].id;
            });
    }

    std::vector<double> dijkstra(std::size_t source) const {
        std::vector<double> d(ids.size(), std::numeric_limits<double>::infinity());
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[source] = 0;
        pq.push({0, source});
        while (!pq.empty()) {
            auto [dist, x] = pq.top();
            pq.pop();
            if (dist > d[x]) continue;
            for (const Arc& a : adj[x])
                if (dist + a.w < d[a.to]) {
                    d[a.to] = dist + a.w;
                    pq.push({d[a.to], a.to});
                }
        }
        return d;
    }
};

}  // namespace detail

// Minimal-geometric-length path; among equal-length paths the one with the
// lexicographically smallest edge-id sequence. Disconnected pairs yield nullopt.
inline std::optional<GraphPath> shortest_path(const RoadGraph& g, VertexId s, VertexId t) {
    if (!g.has_vertex(s) || !g.has_vertex(t))
        throw std::invalid_argument("shortest_path: unknown vertex id");
    if (s == t) return GraphPath{s, t, {}, {g.vertex(s)}, 0.0};

    detail::CompactGraph cg(g);
    std::size_t si = cg.index.at(s), ti = cg.index.at(t);
    std::vector<double> to_t = cg.dijkstra(ti);
    if (!std::isfinite(to_t[si])) return std::nullopt;

    GraphPath path{s, t, {}, {}, to_t[si]};
    std::size_t cur = si;
    std::size_t guard = g.edges().size() + 1;
    while (cur != ti) {
        if (guard-- == 0) throw std::runtime_error("shortest_path: tie-break walk did not converge");
        const detail::CompactGraph::Arc* pick = nullptr;
        for (const auto& a : cg.adj[cur]) {
            double slack = std::abs(a.w + to_t[a.to] - to_t[cur]);
            if (slack <= 1e-9 * (1.0 + to_t[cur]) && a.to != cur) {
                pick = &a;  // adjacency is edge-id sorted, first hit is smallest
                break;
            }
        }
        if (!pick) throw std::runtime_error("shortest_path: broken shortest-path DAG");
        const auto& e = g.edges()[pick->edge];
        path.steps.push_back({e.id, pick->forward});
        detail::append_edge_points(path.points, e, pick->forward);
        cur = pick->to;
    }
    return path;
}

namespace detail {

struct Link {
    VertexId a = 0, b = 0;
    std::vector<PathStep> steps;       // oriented a -> b
    std::vector<std::size_t> edge_idx;
    std::vector<Point> points;
    double length = 0.0;
};

inline std::vector<Link> build_links(const RoadGraph& g) {
    std::vector<Link> links;
    std::vector<char> used(g.edges().size(), 0);

    auto walk = [&](VertexId from, std::size_t first_edge) {
        Link link;
        link.a = from;
        VertexId at = from;
        std::size_t ei = first_edge;
        for (;;) {
            const auto& e = g.edges()[ei];
            bool fwd = e.u == at;
            used[ei] = 1;
            link.steps.push_back({e.id, fwd});
            link.edge_idx.push_back(ei);
            append_edge_points(link.points, e, fwd);
            link.length += e.geometry.length();
            at = fwd ? e.v : e.u;
            if (g.degree(at) != 2 || at == link.a) break;
            std::size_t next = ei;
            for (auto [cand, side] : g.incident(at))
                if (cand != ei && !used[cand]) next = cand;
            if (next == ei) break;  // degree-2 endpoint of an already-walked loop
            ei = next;
        }
        link.b = at;
        return link;
    };

    for (const auto& [vid, pos] : g.vertices()) {
        if (g.degree(vid) == 2 || g.degree(vid) == 0) continue;
        std::vector<std::pair<EdgeId, std::size_t>> ordered;
        for (auto [ei, side] : g.incident(vid)) ordered.push_back({g.edges()[ei].id, ei});
        std::sort(ordered.begin(), ordered.end());
        for (auto [eid, ei] : ordered)
            if (!used[ei]) links.push_back(walk(vid, ei));
    }
    // Remaining edges belong to pure degree-2 cycles; anchor each at its
    // smallest vertex id.
    for (;;) {
        std::size_t first = used.size();
        for (std::size_t i = 0; i < used.size(); ++i)
            if (!used[i]) {
                first = i;
                break;
            }
        if (first == used.size()) break;
        VertexId anchor = std::min(g.edges()[first].u, g.edges()[first].v);
        std::size_t start_edge = first;
        EdgeId best = g.edges()[first].id;
        for (auto [ei, side] : g.incident(anchor))
            if (!used[ei] && g.edges()[ei].id < best) {
                best = g.edges()[ei].id;
                start_edge = ei;
            }
        links.push_back(walk(anchor, start_edge));
    }
    return links;
}

}  // namespace detail

// Every simple path of exactly k links, deduplicated up to reversal; paths
// that cannot reach k links because the graph ends are emitted at their
// maximal length so that every edge is covered.
inline std::vector<GraphPath> enumerate_link_paths(const RoadGraph& g, int k) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("enumerate_link_paths: k must be in {1,2,3}");
    auto links = detail::build_links(g);

    std::map<VertexId, std::vector<std::size_t>> at;
    for (std::size_t li = 0; li < links.size(); ++li) {
        at[links[li].a].push_back(li);
        if (links[li].b != links[li].a) at[links[li].b].push_back(li);
    }

    struct Partial {
        std::vector<std::size_t> seq;   // link indices
        std::vector<bool> fwd;          // orientation per link
        VertexId head, tail;
    };

    auto has_unused = [&](VertexId v, const std::vector<std::size_t>& seq) {
        auto it = at.find(v);
        if (it == at.end()) return false;
        for (std::size_t li : it->second)
            if (std::find(seq.begin(), seq.end(), li) == seq.end()) return true;
        return false;
    };

    std::map<EdgeId, std::size_t> edge_by_id;
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) edge_by_id[g.edges()[ei].id] = ei;

    std::set<std::vector<EdgeId>> seen;
    std::vector<GraphPath> out;

    auto emit = [&](const Partial& p) {
        std::vector<EdgeId> key;
        for (std::size_t i = 0; i < p.seq.size(); ++i) {
            const auto& l = links[p.seq[i]];
            if (p.fwd[i])
                for (const auto& s : l.steps) key.push_back(s.edge);
            else
                for (auto it = l.steps.rbegin(); it != l.steps.rend(); ++it)
                    key.push_back(it->edge);
        }
        std::vector<EdgeId> rev(key.rbegin(), key.rend());
        if (rev < key) key = rev;
        if (!seen.insert(key).second) return;

        GraphPath path;
        path.start = p.tail;
        path.end = p.head;
        for (std::size_t i = 0; i < p.seq.size(); ++i) {
            const auto& l = links[p.seq[i]];
            if (p.fwd[i]) {
                path.steps.insert(path.steps.end(), l.steps.begin(), l.steps.end());
            } else {
                for (auto it = l.steps.rbegin(); it != l.steps.rend(); ++it)
                    path.steps.push_back({it->edge, !it->forward});
            }
            path.length += l.length;
        }
        for (const auto& s : path.steps)
            detail::append_edge_points(path.points, g.edges()[edge_by_id.at(s.edge)], s.forward);
        out.push_back(std::move(path));
    };

    std::function<void(Partial&)> extend = [&](Partial& p) {
        if (p.seq.size() == static_cast<std::size_t>(k)) {
            emit(p);
            return;
        }
        bool extended = false;
        auto it = at.find(p.head);
        if (it != at.end())
            for (std::size_t li : it->second) {
                if (std::find(p.seq.begin(), p.seq.end(), li) != p.seq.end()) continue;
                const auto& l = links[li];
                bool fwd = l.a == p.head;
                Partial q = p;
                q.seq.push_back(li);
                q.fwd.push_back(fwd);
                q.head = fwd ? l.b : l.a;
                extended = true;
                extend(q);
            }
        if (!extended && !has_unused(p.tail, p.seq)) emit(p);  // maximal short path
    };

    for (std::size_t li = 0; li < links.size(); ++li)
        for (bool fwd : {true, false}) {
            Partial p;
            p.seq = {li};
            p.fwd = {fwd};
            p.tail = fwd ? links[li].a : links[li].b;
            p.head = fwd ? links[li].b : links[li].a;
            extend(p);
        }
    return out;
}

}  // namespace mapcons
