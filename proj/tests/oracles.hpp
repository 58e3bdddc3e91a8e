#pragma once

// Test-only reference implementations. These deliberately take different
// algorithmic routes than the library so they can act as independent checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "mapcons/geom.hpp"
#include "mapcons/rng.hpp"

namespace oracles {

using mapcons::Point;
using mapcons::PolyLine;

// Discrete Fréchet by explicit enumeration of every monotone coupling.
// Exponential; only for tiny inputs.
inline double discrete_frechet_enumerated(const std::vector<Point>& p,
                                          const std::vector<Point>& q) {
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, std::size_t, double)> walk =
        [&](std::size_t i, std::size_t j, double acc) {
            acc = std::max(acc, mapcons::dist(p[i], q[j]));
            if (acc >= best) return;
            if (i + 1 == p.size() && j + 1 == q.size()) {
                best = acc;
                return;
            }
            if (i + 1 < p.size() && j + 1 < q.size()) walk(i + 1, j + 1, acc);
            if (i + 1 < p.size()) walk(i + 1, j, acc);
            if (j + 1 < q.size()) walk(i, j + 1, acc);
        };
    walk(0, 0, 0.0);
    return best;
}

namespace detail {

struct IdxInterval {
    long lo, hi;  // inclusive sample-index range
};

// Parameter interval of segment [a,b] within eps of p; local solver so the
// oracle does not share the library's free-space code path.
inline bool ball_segment_interval(Point p, Point a, Point b, double eps, double& t0, double& t1) {
    Point d = b - a;
    Point v = a - p;
    double A = mapcons::dot(d, d);
    double B = mapcons::dot(v, d);
    double C = mapcons::dot(v, v) - eps * eps;
    if (A == 0.0) {
        t0 = 0.0;
        t1 = 1.0;
        return C <= 0.0;
    }
    double disc = B * B - A * C;
    if (disc < 0.0) return false;
    double sq = std::sqrt(disc);
    t0 = std::max((-B - sq) / A, 0.0);
    t1 = std::min((-B + sq) / A, 1.0);
    return t0 <= t1;
}

// Free sample-index intervals of one row: indices j with
// |p - Q(arc_j)| <= eps, where arc_j = j*pitch for j < last and arc_last = L.
inline std::vector<IdxInterval> row_free(const PolyLine& q, Point p, double eps, double pitch,
                                         long last_index) {
    std::vector<IdxInterval> raw;
    const auto& pts = q.points();
    const auto& cum = q.cumulative();
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        double t0, t1;
        if (!ball_segment_interval(p, pts[s], pts[s + 1], eps, t0, t1)) continue;
        double seg = cum[s + 1] - cum[s];
        double a = cum[s] + t0 * seg;
        double b = cum[s] + t1 * seg;
        long jlo = static_cast<long>(std::ceil(a / pitch - 1e-9));
        long jhi = static_cast<long>(std::floor(b / pitch + 1e-9));
        jlo = std::max(jlo, 0L);
        jhi = std::min(jhi, last_index - 1);
        if (b >= q.length() - 1e-9) jhi = last_index;  // trailing endpoint sample
        if (jlo <= jhi) raw.push_back({jlo, jhi});
    }
    std::sort(raw.begin(), raw.end(), [](auto x, auto y) { return x.lo < y.lo; });
    std::vector<IdxInterval> merged;
    for (auto iv : raw) {
        if (!merged.empty() && iv.lo <= merged.back().hi + 1)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    return merged;
}

// Decision: discrete Fréchet of the two pitch-resampled curves <= eps.
// Interval DP over rows; equivalent to the dense coupling DP.
inline bool dense_decision(const PolyLine& p, const PolyLine& q, double eps, double pitch) {
    long np = static_cast<long>(std::floor(p.length() / pitch)) + 1;  // + final endpoint
    long nq = static_cast<long>(std::floor(q.length() / pitch)) + 1;
    auto p_at = [&](long i) { return i >= np ? p.back() : p.point_at(i * pitch); };

    std::vector<IdxInterval> reach;
    for (long i = 0; i <= np; ++i) {
        auto free = row_free(q, p_at(i), eps, pitch, nq);
        if (free.empty()) return false;
        std::vector<IdxInterval> next;
        if (i == 0) {
            if (free.front().lo != 0) return false;
            next.push_back({0, free.front().hi});
        } else {
            // Candidate entries: previous reach shifted by 0 or +1.
            std::size_t k = 0;
            for (auto f : free) {
                while (k < reach.size() && reach[k].hi + 1 < f.lo) ++k;
                if (k == reach.size()) break;
                long entry = std::max(f.lo, reach[k].lo);
                if (entry <= f.hi && reach[k].lo <= f.hi + 1 && entry <= reach[k].hi + 1)
                    next.push_back({entry, f.hi});
            }
        }
        if (next.empty()) return false;
        reach = std::move(next);
    }
    return reach.back().hi == nq;
}

}  // namespace detail

// Dense-resampling Discrete Fréchet oracle: the discrete Fréchet distance of
// both curves resampled at the given arc pitch, computed to +-value_tol by
// bisection of an interval-based decision.
inline double dense_discrete_frechet(const PolyLine& p, const PolyLine& q, double pitch = 0.01,
                                     double value_tol = 0.002) {
    double lo = std::max(mapcons::dist(p.front(), q.front()),
                         mapcons::dist(p.back(), q.back()));
    double hi = 0.0;
    for (Point a : p.points())
        for (Point b : q.points()) hi = std::max(hi, mapcons::dist(a, b));
    if (detail::dense_decision(p, q, lo, pitch)) return lo;
    while (hi - lo > value_tol) {
        double mid = 0.5 * (lo + hi);
        if (detail::dense_decision(p, q, mid, pitch)) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline PolyLine random_polyline(mapcons::Rng& rng, std::size_t max_vertices, double extent = 100.0) {
    std::size_t n = 2 + mapcons::uniform_index(rng, max_vertices - 1);
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({mapcons::uniform_range(rng, 0, extent), mapcons::uniform_range(rng, 0, extent)});
    return PolyLine(std::move(pts));
}

}  // namespace oracles
