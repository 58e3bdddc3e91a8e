#pragma once

// Curve distances: Discrete Fréchet (coupling DP), continuous Fréchet
// decision over the free-space diagram, and the value via bisection.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "mapcons/geom.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

inline double discrete_frechet(std::span<const Point> p, std::span<const Point> q) {
    if (p.empty() || q.empty())
        throw std::invalid_argument("discrete_frechet: empty point sequence");
    const std::size_t n = p.size(), m = q.size();
    std::vector<double> prev(m), cur(m);
    for (std::size_t j = 0; j < m; ++j)
        prev[j] = std::max(dist(p[0], q[j]), j > 0 ? prev[j - 1] : 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        cur[0] = std::max(dist(p[i], q[0]), prev[0]);
        for (std::size_t j = 1; j < m; ++j) {
            double reach = std::min({prev[j], prev[j - 1], cur[j - 1]});
            cur[j] = std::max(dist(p[i], q[j]), reach);
        }
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

inline double discrete_frechet(const PolyLine& p, const PolyLine& q) {
    return discrete_frechet(std::span<const Point>(p.points()),
                            std::span<const Point>(q.points()));
}

// Free sub-interval of the segment [a,b] within distance eps of point q,
// as parameters t in [0,1]. Boundary roots are snapped so exact tangency
// (identity curves, curves attaining the bound) stays decidable.
inline Interval free_interval(Point q, Point a, Point b, double eps) {
    Point d = b - a;
    Point v = a - q;
    double A = dot(d, d);
    double B = dot(v, d);
    double C = dot(v, v) - eps * eps;
    if (A == 0.0) return C <= 0.0 ? Interval{0.0, 1.0} : Interval::none();
    double disc = B * B - A * C;
    if (disc < 0.0) {
        double scale = std::max(1.0, std::abs(A * C));
        if (disc > -1e-9 * scale) disc = 0.0;
        else return Interval::none();
    }
    double sq = std::sqrt(disc);
    double lo = (-B - sq) / A;
    double hi = (-B + sq) / A;
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (lo < 1e-9) lo = 0.0;
    if (hi > 1.0 - 1e-9) hi = 1.0;
    if (lo > hi) return Interval::none();
    return {lo, hi};
}

namespace detail {

// Alt–Godau free-space diagram decision, O(n*m). P spans the x-axis.
inline bool free_space_decision(std::span<const Point> p, std::span<const Point> q, double eps) {
    const std::size_t n = p.size() - 1;  // P segments
    const std::size_t m = q.size() - 1;  // Q segments
    if (dist(p.front(), q.front()) > eps) return false;
    if (dist(p.back(), q.back()) > eps) return false;

    auto free_v = [&](std::size_t i, std::size_t j) {  // vertical edge x=i, y in [j,j+1]
        return free_interval(p[i], q[j], q[j + 1], eps);
    };
    auto free_h = [&](std::size_t i, std::size_t j) {  // horizontal edge y=j, x in [i,i+1]
        return free_interval(q[j], p[i], p[i + 1], eps);
    };

    // Left boundary: climbable only while contiguous from the origin.
    std::vector<Interval> V(m);
    for (std::size_t j = 0; j < m; ++j) {
        Interval f = free_v(0, j);
        bool from_below = j == 0 || (!V[j - 1].empty() && V[j - 1].hi == 1.0);
        V[j] = (from_below && !f.empty() && f.lo == 0.0) ? f : Interval::none();
    }
    // Bottom boundary likewise.
    std::vector<Interval> B(n);
    for (std::size_t i = 0; i < n; ++i) {
        Interval f = free_h(i, 0);
        bool from_left = i == 0 || (!B[i - 1].empty() && B[i - 1].hi == 1.0);
        B[i] = (from_left && !f.empty() && f.lo == 0.0) ? f : Interval::none();
    }

    for (std::size_t i = 0; i < n; ++i) {
        Interval hbot = B[i];
        for (std::size_t j = 0; j < m; ++j) {
            Interval vleft = V[j];
            Interval fr = free_v(i + 1, j);
            Interval ft = free_h(i, j + 1);
            Interval vright = Interval::none();
            Interval htop = Interval::none();
            if (!vleft.empty()) {
                vright = {std::max(fr.lo, vleft.lo), fr.hi};
                htop = ft;
            }
            if (!hbot.empty()) {
                vright = fr;  // any height reachable from a bottom entry
                if (htop.empty()) htop = {std::max(ft.lo, hbot.lo), ft.hi};
            }
            V[j] = vright;
            hbot = htop;
        }
    }
    return !V[m - 1].empty() && V[m - 1].hi == 1.0;
}

}  // namespace detail

// True iff the Fréchet distance between P and Q is at most eps.
// Monotone in eps by construction.
inline bool frechet_decision(const PolyLine& p, const PolyLine& q, double eps) {
    if (eps < 0) throw std::invalid_argument("frechet_decision: eps must be >= 0");
    return detail::free_space_decision(p.points(), q.points(), eps);
}

// Fréchet distance to within tau by bisecting frechet_decision between
// max(endpoint distances) and the max pairwise vertex distance.
inline double frechet_distance(const PolyLine& p, const PolyLine& q, double tau = 0.1) {
    if (tau <= 0) throw std::invalid_argument("frechet_distance: tau must be > 0");
    double lo = std::max(dist(p.front(), q.front()), dist(p.back(), q.back()));
    double hi = 0.0;
    for (Point a : p.points())
        for (Point b : q.points()) hi = std::max(hi, dist(a, b));
    if (frechet_decision(p, q, lo)) return lo;
    while (hi - lo > tau) {
        double mid = 0.5 * (lo + hi);
        if (frechet_decision(p, q, mid)) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mapcons
