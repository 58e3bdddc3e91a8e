#pragma once

// Planar geometric primitives. All coordinates are projected meters;
// angles are degrees, north = 0, clockwise positive (GPS heading convention).

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace mapcons {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
    friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point a) { return dot(a, a); }
inline double norm(Point a) { return std::sqrt(norm2(a)); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline double dist2(Point a, Point b) { return norm2(a - b); }

// Heading of the displacement a -> b. North = 0°, clockwise positive, [0, 360).
inline double bearing_deg(Point a, Point b) {
    double d = std::atan2(b.x - a.x, b.y - a.y) * 180.0 / M_PI;
    if (d < 0) d += 360.0;
    if (d >= 360.0) d -= 360.0;
    return d;
}

// Signed smallest rotation from heading a to heading b, in (-180, 180].
inline double heading_diff_deg(double a, double b) {
    double d = std::fmod(b - a, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

inline double abs_heading_diff_deg(double a, double b) {
    return std::abs(heading_diff_deg(a, b));
}

// Closest point on segment [a,b]; t receives the clamped parameter.
inline Point closest_point_on_segment(Point p, Point a, Point b, double* t_out = nullptr) {
    Point d = b - a;
    double len2 = norm2(d);
    double t = len2 > 0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
    if (t_out) *t_out = t;
    return a + d * t;
}

inline double point_segment_distance(Point p, Point a, Point b) {
    return dist(p, closest_point_on_segment(p, a, b));
}

// Polygonal curve. Consecutive duplicate points are dropped at construction;
// a valid PolyLine has >= 2 points and positive total length.
class PolyLine {
public:
    PolyLine() = default;

    explicit PolyLine(std::vector<Point> points) {
        pts_.reserve(points.size());
        for (const Point& p : points) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw std::invalid_argument("PolyLine: non-finite coordinate");
            if (!pts_.empty() && dist2(pts_.back(), p) == 0.0) continue;
            pts_.push_back(p);
        }
        if (pts_.size() < 2)
            throw std::invalid_argument("PolyLine: needs at least 2 distinct points");
        cum_.resize(pts_.size());
        cum_[0] = 0.0;
        for (std::size_t i = 1; i < pts_.size(); ++i)
            cum_[i] = cum_[i - 1] + dist(pts_[i - 1], pts_[i]);
    }

    const std::vector<Point>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    std::size_t segments() const { return pts_.size() - 1; }
    double length() const { return cum_.back(); }
    const std::vector<double>& cumulative() const { return cum_; }
    Point front() const { return pts_.front(); }
    Point back() const { return pts_.back(); }

    // Point at arc-length position s (clamped to [0, length]).
    Point point_at(double s) const {
        if (s <= 0) return pts_.front();
        if (s >= cum_.back()) return pts_.back();
        auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        std::size_t i = static_cast<std::size_t>(it - cum_.begin());  // cum_[i-1] <= s < cum_[i]
        double seg = cum_[i] - cum_[i - 1];
        double t = (s - cum_[i - 1]) / seg;
        return pts_[i - 1] + (pts_[i] - pts_[i - 1]) * t;
    }

    // Samples at arc pitch delta; vertices and both endpoints always included.
    std::vector<Point> sample_points(double delta) const {
        if (delta <= 0) throw std::invalid_argument("sample_points: pitch must be > 0");
        std::vector<double> arcs = cum_;
        for (double s = delta; s < cum_.back(); s += delta) arcs.push_back(s);
        std::sort(arcs.begin(), arcs.end());
        std::vector<Point> out;
        out.reserve(arcs.size());
        double last = -1.0;
        for (double s : arcs) {
            if (s - last < 1e-9) continue;
            last = s;
            out.push_back(point_at(s));
        }
        return out;
    }

    PolyLine reversed() const {
        std::vector<Point> r(pts_.rbegin(), pts_.rend());
        return PolyLine(std::move(r));
    }

private:
    std::vector<Point> pts_;
    std::vector<double> cum_;
};

inline double polyline_length(std::span<const Point> pts) {
    double len = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += dist(pts[i - 1], pts[i]);
    return len;
}

// Min distance from p to any segment of L.
inline double point_to_polyline_distance(Point p, std::span<const Point> pts) {
    if (pts.size() < 2)
        throw std::invalid_argument("point_to_polyline_distance: degenerate polyline");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        best = std::min(best, point_segment_distance(p, pts[i], pts[i + 1]));
    return best;
}

inline double point_to_polyline_distance(Point p, const PolyLine& line) {
    return point_to_polyline_distance(p, std::span<const Point>(line.points()));
}

// Resample to n arc-length-uniform points (endpoints included), n >= 2.
inline std::vector<Point> resample_uniform(const PolyLine& line, std::size_t n) {
    if (n < 2) throw std::invalid_argument("resample_uniform: n must be >= 2");
    std::vector<Point> out;
    out.reserve(n);
    double step = line.length() / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(line.point_at(step * static_cast<double>(i)));
    return out;
}

struct BBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(Point p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    void add(const BBox& b) {
        min_x = std::min(min_x, b.min_x);
        min_y = std::min(min_y, b.min_y);
        max_x = std::max(max_x, b.max_x);
        max_y = std::max(max_y, b.max_y);
    }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }

    // Axis-aligned distance between boxes (0 when overlapping).
    double distance_to(const BBox& o) const {
        double dx = std::max({0.0, o.min_x - max_x, min_x - o.max_x});
        double dy = std::max({0.0, o.min_y - max_y, min_y - o.max_y});
        return std::hypot(dx, dy);
    }
};

inline BBox bbox_of(std::span<const Point> pts) {
    BBox b;
    for (Point p : pts) b.add(p);
    return b;
}

}  // namespace mapcons
