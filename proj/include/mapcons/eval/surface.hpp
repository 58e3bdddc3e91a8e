#pragma once

// Free-space surface between a polyline and a whole graph: decides whether
// some walk in G (entering and leaving edges at shared vertices, partial
// first/last edges allowed) is within Fréchet distance eps of the path, and
// computes the minimal such eps by bisection. Per-edge free-space diagrams
// are glued along vertex lines; reachability is propagated to a fixpoint.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/frechet.hpp"
#include "mapcons/geom.hpp"
#include "mapcons/graph.hpp"

namespace mapcons {

class GraphMatcher {
public:
    explicit GraphMatcher(const RoadGraph& g) : g_(&g) {
        for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
            const auto& e = g.edges()[ei];
            const auto& pts = e.geometry.points();
            BBox box = bbox_of(pts);
            dir_edges_.push_back({e.u, e.v, pts, box});
            std::vector<Point> rev(pts.rbegin(), pts.rend());
            dir_edges_.push_back({e.v, e.u, std::move(rev), box});
        }
        for (std::size_t d = 0; d < dir_edges_.size(); ++d)
            out_edges_[dir_edges_[d].tail].push_back(d);
        grid_ = edge_segment_grid(g);
    }

    // True iff some walk in the graph is within Fréchet distance eps of path.
    bool decision(std::span<const Point> path, double eps) const {
        if (path.size() < 2) throw std::invalid_argument("GraphMatcher: path needs >= 2 points");
        if (eps < 0) throw std::invalid_argument("GraphMatcher: eps must be >= 0");
        Surface s(*this, path, eps);
        return s.run();
    }

    // Minimal eps (within tau) such that decision(path, eps) holds.
    double min_frechet(std::span<const Point> path, double tau = 0.5) const {
        if (tau <= 0) throw std::invalid_argument("GraphMatcher: tau must be > 0");
        auto hit = grid_.nearest(path[0]);
        if (!hit.found) throw std::invalid_argument("GraphMatcher: graph has no edges");
        // Matching the whole path to one point of G is always a valid walk.
        double hi = hit.distance + polyline_length(path) + tau;
        double lo = 0.0;
        double probe = std::max(tau, hi / 1024.0);
        while (probe < hi && !decision(path, probe)) {
            lo = probe;
            probe = std::min(hi, probe * 2.0);
        }
        if (probe >= hi && !decision(path, hi)) {
            int guard = 64;
            while (!decision(path, hi)) {
                lo = hi;
                hi *= 2.0;
                if (--guard == 0) throw std::runtime_error("min_frechet: no upper bound found");
            }
        } else {
            hi = probe;
        }
        while (hi - lo > tau) {
            double mid = 0.5 * (lo + hi);
            if (decision(path, mid)) hi = mid;
            else lo = mid;
        }
        return 0.5 * (lo + hi);
    }

    double min_frechet(const PolyLine& path, double tau = 0.5) const {
        return min_frechet(std::span<const Point>(path.points()), tau);
    }

private:
    struct DirEdge {
        VertexId tail, head;
        std::vector<Point> pts;  // oriented tail -> head
        BBox box;
    };

    // One decision run; owns all per-(path, eps) state.
    class Surface {
    public:
        Surface(const GraphMatcher& m, std::span<const Point> path, double eps)
            : m_(m), path_(path), eps_(eps), n_(path.size() - 1) {}

        bool run() {
            BBox pbox = bbox_of(path_);
            for (std::size_t d = 0; d < m_.dir_edges_.size(); ++d)
                if (m_.dir_edges_[d].box.distance_to(pbox) <= eps_) candidates_.push_back(d);
            if (candidates_.empty()) return false;

            for (std::size_t d : candidates_) {
                ensure_vertex(m_.dir_edges_[d].tail);
                ensure_vertex(m_.dir_edges_[d].head);
            }
            // Global start: the walk may begin at any vertex within eps of path[0].
            for (auto& [vid, vl] : lines_)
                if (dist(path_[0], m_.g_->vertex(vid)) <= eps_)
                    if (reach(vid, 0.0) && covers_end(vid)) return true;

            for (std::size_t d : candidates_) push(d);
            std::size_t budget = 1000 + 200 * candidates_.size();
            while (!queue_.empty()) {
                if (budget-- == 0) throw std::runtime_error("free-space surface did not converge");
                std::size_t d = queue_.front();
                queue_.pop_front();
                in_queue_[d] = false;
                if (sweep_edge(d)) return true;
            }
            return false;
        }

    private:
        struct VertexLine {
            std::vector<Interval> free;        // merged free intervals over x in [0, n]
            std::vector<double> first_reach;   // per free interval; inf when unreached
        };

        void ensure_vertex(VertexId v) {
            if (lines_.count(v)) return;
            VertexLine vl;
            Point pos = m_.g_->vertex(v);
            for (std::size_t i = 0; i < n_; ++i) {
                Interval iv = free_interval(pos, path_[i], path_[i + 1], eps_);
                if (iv.empty()) continue;
                double a = static_cast<double>(i) + iv.lo;
                double b = static_cast<double>(i) + iv.hi;
                if (!vl.free.empty() && a <= vl.free.back().hi + 1e-12)
                    vl.free.back().hi = std::max(vl.free.back().hi, b);
                else
                    vl.free.push_back({a, b});
            }
            vl.first_reach.assign(vl.free.size(), std::numeric_limits<double>::infinity());
            lines_.emplace(v, std::move(vl));
        }

        // Record that the walk can sit at vertex v from path parameter x on
        // (within the free interval containing x). Returns true if new.
        bool reach(VertexId v, double x) {
            auto& vl = lines_.at(v);
            for (std::size_t f = 0; f < vl.free.size(); ++f) {
                if (x < vl.free[f].lo - 1e-9 || x > vl.free[f].hi + 1e-9) continue;
                double clamped = std::max(x, vl.free[f].lo);
                if (clamped < vl.first_reach[f] - 1e-12) {
                    vl.first_reach[f] = clamped;
                    return true;
                }
                return false;
            }
            return false;
        }

        bool covers_end(VertexId v) const {
            const auto& vl = lines_.at(v);
            double end = static_cast<double>(n_);
            for (std::size_t f = 0; f < vl.free.size(); ++f)
                if (vl.first_reach[f] <= end && vl.free[f].lo <= end + 1e-9 &&
                    end <= vl.free[f].hi + 1e-9)
                    return true;
            return false;
        }

        void push(std::size_t d) {
            if (in_queue_.size() < m_.dir_edges_.size())
                in_queue_.assign(m_.dir_edges_.size(), false);
            if (in_queue_[d]) return;
            in_queue_[d] = true;
            queue_.push_back(d);
        }

        // Earliest entry parameter from the tail's reach set within [i, i+1].
        double bottom_entry(const VertexLine& vl, std::size_t i) const {
            double lo = static_cast<double>(i), hi = lo + 1.0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < vl.free.size(); ++f) {
                if (vl.first_reach[f] > hi) continue;
                if (vl.free[f].hi < lo - 1e-12) continue;
                if (vl.free[f].lo > hi + 1e-12) break;
                double entry = std::max(vl.first_reach[f], lo);
                if (entry <= std::min(vl.free[f].hi, hi) + 1e-12) best = std::min(best, entry);
            }
            return best;
        }

        // Propagate through one directed edge's diagram. Returns true on a
        // right-boundary exit (path fully consumed mid-edge).
        bool sweep_edge(std::size_t d) {
            const DirEdge& de = m_.dir_edges_[d];
            const auto& q = de.pts;
            const std::size_t m = q.size() - 1;
            const VertexLine& tail = lines_.at(de.tail);

            // Left boundary x=0 is fully seeded: the walk may start anywhere.
            std::vector<Interval> V(m);
            for (std::size_t j = 0; j < m; ++j)
                V[j] = free_interval(path_[0], q[j], q[j + 1], eps_);

            std::vector<std::pair<double, double>> exits;  // global-x top-boundary reaches
            for (std::size_t i = 0; i < n_; ++i) {
                Interval hbot = Interval::none();
                double b = bottom_entry(tail, i);
                if (std::isfinite(b)) hbot = {b - static_cast<double>(i), 1.0};
                for (std::size_t j = 0; j < m; ++j) {
                    Interval vleft = V[j];
                    Interval fr = free_interval(path_[i + 1], q[j], q[j + 1], eps_);
                    Interval ft = free_interval(q[j + 1], path_[i], path_[i + 1], eps_);
                    Interval vright = Interval::none();
                    Interval htop = Interval::none();
                    if (!vleft.empty()) {
                        vright = {std::max(fr.lo, vleft.lo), fr.hi};
                        htop = ft;
                    }
                    if (!hbot.empty()) {
                        vright = fr;
                        if (htop.empty()) htop = {std::max(ft.lo, hbot.lo), ft.hi};
                    }
                    V[j] = vright;
                    hbot = htop;
                }
                if (!hbot.empty()) {
                    double a = static_cast<double>(i) + hbot.lo;
                    double bb = static_cast<double>(i) + hbot.hi;
                    if (!exits.empty() && a <= exits.back().second + 1e-12)
                        exits.back().second = std::max(exits.back().second, bb);
                    else
                        exits.push_back({a, bb});
                }
            }
            for (const auto& iv : V)
                if (!iv.empty()) return true;  // reached x = n inside this edge

            bool grew = false;
            for (auto [a, bb] : exits)
                if (reach(de.head, a)) grew = true;
            if (grew) {
                if (covers_end(de.head)) return true;
                auto it = m_.out_edges_.find(de.head);
                if (it != m_.out_edges_.end())
                    for (std::size_t nd : it->second)
                        if (std::binary_search(candidates_.begin(), candidates_.end(), nd))
                            push(nd);
            }
            return false;
        }

        const GraphMatcher& m_;
        std::span<const Point> path_;
        double eps_;
        std::size_t n_;
        std::vector<std::size_t> candidates_;  // sorted by construction
        std::map<VertexId, VertexLine> lines_;
        std::deque<std::size_t> queue_;
        std::vector<bool> in_queue_;
    };

    const RoadGraph* g_;
    std::vector<DirEdge> dir_edges_;
    std::map<VertexId, std::vector<std::size_t>> out_edges_;
    SegmentGrid grid_;
};

// Convenience wrapper: minimal eps such that some path in G is within
// Fréchet distance eps of the given path.
inline double map_match_min_frechet(const PolyLine& path, const RoadGraph& g, double tau = 0.5) {
    if (g.edges().empty()) throw std::invalid_argument("map_match_min_frechet: empty graph");
    GraphMatcher matcher(g);
    return matcher.min_frechet(path, tau);
}

}  // namespace mapcons
