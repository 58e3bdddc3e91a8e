#pragma once

// Graph-sampling measure: from random root locations, place marbles on C and
// holes on G every `density` meters of network distance out to `radius`,
// match them one-to-one within `matched_dist` (maximum-cardinality bipartite
// matching), and aggregate precision / recall / F-score over all runs.
// By default runs whose root has no G correspondence within matched_dist are
// skipped (the modified variant); set modified=false for the original.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/rng.hpp"
#include "mapcons/spatial_grid.hpp"

namespace mapcons {

struct GraphSamplingParams {
    double density_m = 5.0;
    double matched_dist_m = 50.0;
    double radius_m = 300.0;
    std::size_t runs = 1000;
    std::uint64_t seed = 1;
    bool modified = true;
};

struct GraphSamplingReport {
    struct Row {
        std::size_t run_id = 0;
        Point root{};
        std::size_t marbles = 0;
        std::size_t holes = 0;
        std::size_t matched = 0;
    };
    std::vector<Row> runs;
    std::size_t skipped_roots = 0;
    std::size_t matched_marbles = 0, spurious_marbles = 0;
    std::size_t matched_holes = 0, empty_holes = 0;
    double precision = 0, recall = 0, f_score = 0;
};

namespace detail {

// Network-distance flood with exact sample placement: positions on each edge
// where the true graph distance from the root equals a multiple of density.
class GraphFlood {
public:
    explicit GraphFlood(const RoadGraph& g) : g_(&g) {
        for (const auto& [id, p] : g.vertices()) {
            index_[id] = ids_.size();
            ids_.push_back(id);
        }
        adj_.resize(ids_.size());
        for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
            const auto& e = g.edges()[ei];
            double w = e.geometry.length();
            adj_[index_.at(e.u)].push_back({index_.at(e.v), w});
            if (e.u != e.v) adj_[index_.at(e.v)].push_back({index_.at(e.u), w});
        }
        total_length_ = g.total_length();
    }

    double total_length() const { return total_length_; }

    // Arc position `offset` on edge `root_edge` (index into g.edges()).
    std::vector<Point> samples(std::size_t root_edge, double offset, double radius,
                               double density) const {
        const auto& edges = g_->edges();
        const auto& re = edges[root_edge];
        double rlen = re.geometry.length();
        offset = std::clamp(offset, 0.0, rlen);

        std::vector<double> d(ids_.size(), std::numeric_limits<double>::infinity());
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        auto seed_vertex = [&](VertexId v, double dist0) {
            std::size_t i = index_.at(v);
            if (dist0 < d[i]) {
                d[i] = dist0;
                pq.push({dist0, i});
            }
        };
        seed_vertex(re.u, offset);
        seed_vertex(re.v, rlen - offset);
        while (!pq.empty()) {
            auto [dist, x] = pq.top();
            pq.pop();
            if (dist > d[x] || dist > radius) continue;
            for (auto [to, w] : adj_[x])
                if (dist + w < d[to]) {
                    d[to] = dist + w;
                    pq.push({d[to], to});
                }
        }

        std::vector<Point> out;
        std::set<std::pair<double, double>> seen;  // shell points at shared vertices
        long kmax = static_cast<long>(std::floor(radius / density));
        for (std::size_t ei = 0; ei < edges.size(); ++ei) {
            const auto& e = edges[ei];
            double len = e.geometry.length();
            double da = d[index_.at(e.u)], db = d[index_.at(e.v)];
            auto true_dist = [&](double x) {
                double t = std::min(da + x, db + len - x);
                if (ei == root_edge) t = std::min(t, std::abs(x - offset));
                return t;
            };
            std::vector<double> positions;
            auto try_pos = [&](double x) {
                if (x < -1e-9 || x > len + 1e-9) return;
                x = std::clamp(x, 0.0, len);
                positions.push_back(x);
            };
            for (long k = 0; k <= kmax; ++k) {
                double target = static_cast<double>(k) * density;
                try_pos(target - da);
                try_pos(db + len - target);
                if (ei == root_edge) {
                    try_pos(offset - target);
                    try_pos(offset + target);
                }
            }
            std::sort(positions.begin(), positions.end());
            double last = -1.0;
            for (double x : positions) {
                if (x - last < 1e-9) continue;
                double td = true_dist(x);
                if (td > radius + 1e-9) continue;
                double rem = std::fmod(td, density);
                if (std::min(rem, density - rem) > 1e-6) continue;  // not a true shell point
                last = x;
                Point pt = e.geometry.point_at(x);
                if (!seen.insert({pt.x, pt.y}).second) continue;
                out.push_back(pt);
            }
        }
        return out;
    }

private:
    struct Arc {
        std::size_t to;
        double w;
    };
    const RoadGraph* g_;
    std::vector<VertexId> ids_;
    std::map<VertexId, std::size_t> index_;
    std::vector<std::vector<Arc>> adj_;
    double total_length_ = 0;
};

// Maximum-cardinality bipartite matching (Kuhn's augmenting paths).
inline std::size_t max_bipartite_matching(const std::vector<std::vector<std::size_t>>& adj,
                                          std::size_t n_right) {
    std::vector<long> match_right(n_right, -1);
    std::vector<char> visited;
    std::function<bool(std::size_t)> try_augment = [&](std::size_t left) {
        for (std::size_t r : adj[left]) {
            if (visited[r]) continue;
            visited[r] = 1;
            if (match_right[r] < 0 || try_augment(static_cast<std::size_t>(match_right[r]))) {
                match_right[r] = static_cast<long>(left);
                return true;
            }
        }
        return false;
    };
    std::size_t matched = 0;
    for (std::size_t l = 0; l < adj.size(); ++l) {
        visited.assign(n_right, 0);
        if (try_augment(l)) ++matched;
    }
    return matched;
}

}  // namespace detail

inline GraphSamplingReport eval_graph_sampling(const RoadGraph& c, const RoadGraph& g,
                                               const GraphSamplingParams& params) {
    if (c.edges().empty() || g.edges().empty())
        throw std::invalid_argument("eval_graph_sampling: empty graph");
    if (params.density_m <= 0 || params.matched_dist_m <= 0 || params.radius_m <= 0 ||
        params.runs == 0)
        throw std::invalid_argument("eval_graph_sampling: parameters must be positive");

    detail::GraphFlood flood_c(c), flood_g(g);
    SegmentGrid g_grid = edge_segment_grid(g);

    // Cumulative edge lengths of C for uniform-by-length root draws.
    std::vector<double> cum{0.0};
    for (const auto& e : c.edges()) cum.push_back(cum.back() + e.geometry.length());

    Rng rng(params.seed);
    GraphSamplingReport report;
    std::size_t attempts_cap = params.runs * 20;
    for (std::size_t attempt = 0; attempt < attempts_cap && report.runs.size() < params.runs;
         ++attempt) {
        double arc = uniform01(rng) * cum.back();
        std::size_t ei =
            static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), arc) - cum.begin()) -
            1;
        ei = std::min(ei, c.edges().size() - 1);
        double offset = arc - cum[ei];
        Point root = c.edges()[ei].geometry.point_at(offset);

        auto hit = g_grid.nearest(root);
        if (params.modified && hit.distance > params.matched_dist_m) {
            ++report.skipped_roots;
            continue;
        }
        auto marbles = flood_c.samples(ei, offset, params.radius_m, params.density_m);
        const auto& hseg = g_grid.segments()[hit.index];
        const auto& hedge_geom = g.edges()[hseg.owner].geometry;
        double hoffset = hedge_geom.cumulative()[hseg.seg] + hit.t * dist(hseg.a, hseg.b);
        auto holes = flood_g.samples(hseg.owner, hoffset, params.radius_m, params.density_m);
        if (marbles.empty() || holes.empty()) {
            ++report.skipped_roots;
            continue;
        }

        // Hole buckets at matched-dist cell size for neighbor lookup.
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
        double cell = params.matched_dist_m;
        auto key = [&](long cx, long cy) {
            return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
                   static_cast<std::uint32_t>(cy);
        };
        for (std::size_t h = 0; h < holes.size(); ++h)
            buckets[key(static_cast<long>(std::floor(holes[h].x / cell)),
                        static_cast<long>(std::floor(holes[h].y / cell)))]
                .push_back(h);
        std::vector<std::vector<std::size_t>> adj(marbles.size());
        for (std::size_t mi = 0; mi < marbles.size(); ++mi) {
            long cx = static_cast<long>(std::floor(marbles[mi].x / cell));
            long cy = static_cast<long>(std::floor(marbles[mi].y / cell));
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    auto it = buckets.find(key(cx + dx, cy + dy));
                    if (it == buckets.end()) continue;
                    for (std::size_t h : it->second)
                        if (dist(marbles[mi], holes[h]) <= params.matched_dist_m)
                            adj[mi].push_back(h);
                }
            std::sort(adj[mi].begin(), adj[mi].end());
        }
        std::size_t matched = detail::max_bipartite_matching(adj, holes.size());

        report.runs.push_back({report.runs.size(), root, marbles.size(), holes.size(), matched});
        report.matched_marbles += matched;
        report.spurious_marbles += marbles.size() - matched;
        report.matched_holes += matched;
        report.empty_holes += holes.size() - matched;
    }
    if (report.runs.empty())
        throw std::invalid_argument("eval_graph_sampling: no usable runs");

    double pm = static_cast<double>(report.matched_marbles);
    double ph = static_cast<double>(report.matched_holes);
    report.precision = pm / static_cast<double>(report.matched_marbles + report.spurious_marbles);
    report.recall = ph / static_cast<double>(report.matched_holes + report.empty_holes);
    if (report.precision + report.recall > 0)
        report.f_score =
            2.0 * report.precision * report.recall / (report.precision + report.recall);
    return report;
}

}  // namespace mapcons
