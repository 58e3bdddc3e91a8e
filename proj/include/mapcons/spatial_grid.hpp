#pragma once

// Uniform grid over line segments for nearest-point and radius queries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "mapcons/geom.hpp"

namespace mapcons {

struct SegmentRef {
    std::size_t owner;  // caller-defined (edge index, polyline index, ...)
    std::size_t seg;    // segment index within the owner
    Point a, b;
};

class SegmentGrid {
public:
    SegmentGrid() = default;

    explicit SegmentGrid(std::vector<SegmentRef> segments, double cell = 0.0)
        : segs_(std::move(segments)) {
        for (const auto& s : segs_) {
            box_.add(s.a);
            box_.add(s.b);
        }
        if (segs_.empty() || !box_.valid()) return;
        double span = std::max(box_.max_x - box_.min_x, box_.max_y - box_.min_y);
        cell_ = cell > 0 ? cell : std::max(1.0, span / 128.0);
        for (std::size_t idx = 0; idx < segs_.size(); ++idx) {
            BBox b;
            b.add(segs_[idx].a);
            b.add(segs_[idx].b);
            for (long cy = cell_y(b.min_y); cy <= cell_y(b.max_y); ++cy)
                for (long cx = cell_x(b.min_x); cx <= cell_x(b.max_x); ++cx)
                    cells_[key(cx, cy)].push_back(idx);
        }
    }

    bool empty() const { return segs_.empty(); }
    const std::vector<SegmentRef>& segments() const { return segs_; }

    struct Hit {
        std::size_t index = 0;  // into segments()
        double t = 0.0;         // parameter on the segment
        Point point{};
        double distance = std::numeric_limits<double>::infinity();
        bool found = false;
    };

    // Nearest segment point to p over all segments.
    Hit nearest(Point p) const {
        Hit best;
        if (segs_.empty()) return best;
        if (segs_.size() <= 64) {
            scan_all(p, best);
            return best;
        }
        long px = cell_x(p.x), py = cell_y(p.y);
        long max_ring = ring_bound(p);
        for (long r = 0;; ++r) {
            if (best.found && static_cast<double>(r - 1) * cell_ > best.distance) break;
            if (r > max_ring) break;
            visit_ring(px, py, r, p, best);
        }
        if (!best.found) scan_all(p, best);
        return best;
    }

    // Nearest segment point within radius; found=false if none.
    Hit nearest_within(Point p, double radius) const {
        Hit best = nearest(p);
        if (best.found && best.distance > radius) best.found = false;
        return best;
    }

    // Indices of segments whose cell neighborhood intersects the disk (p, radius).
    std::vector<std::size_t> candidates_within(Point p, double radius) const {
        std::vector<std::size_t> out;
        if (segs_.empty()) return out;
        if (segs_.size() <= 64) {
            out.resize(segs_.size());
            for (std::size_t i = 0; i < segs_.size(); ++i) out[i] = i;
            return out;
        }
        long x0 = cell_x(p.x - radius), x1 = cell_x(p.x + radius);
        long y0 = cell_y(p.y - radius), y1 = cell_y(p.y + radius);
        std::vector<char> seen(segs_.size(), 0);
        for (long cy = y0; cy <= y1; ++cy)
            for (long cx = x0; cx <= x1; ++cx) {
                auto it = cells_.find(key(cx, cy));
                if (it == cells_.end()) continue;
                for (std::size_t idx : it->second)
                    if (!seen[idx]) {
                        seen[idx] = 1;
                        out.push_back(idx);
                    }
            }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    long cell_x(double x) const { return static_cast<long>(std::floor((x - box_.min_x) / cell_)); }
    long cell_y(double y) const { return static_cast<long>(std::floor((y - box_.min_y) / cell_)); }
    static std::uint64_t key(long cx, long cy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
               static_cast<std::uint32_t>(cy);
    }

    long ring_bound(Point p) const {
        double far_x = std::max(std::abs(p.x - box_.min_x), std::abs(p.x - box_.max_x));
        double far_y = std::max(std::abs(p.y - box_.min_y), std::abs(p.y - box_.max_y));
        return static_cast<long>(std::max(far_x, far_y) / cell_) + 2;
    }

    void consider(std::size_t idx, Point p, Hit& best) const {
        double t;
        Point c = closest_point_on_segment(p, segs_[idx].a, segs_[idx].b, &t);
        double d = dist(p, c);
        if (!best.found || d < best.distance ||
            (d == best.distance && idx < best.index)) {
            best = {idx, t, c, d, true};
        }
    }

    void scan_all(Point p, Hit& best) const {
        for (std::size_t i = 0; i < segs_.size(); ++i) consider(i, p, best);
    }

    void visit_cell(long cx, long cy, Point p, Hit& best) const {
        auto it = cells_.find(key(cx, cy));
        if (it == cells_.end()) return;
        for (std::size_t idx : it->second) consider(idx, p, best);
    }

    void visit_ring(long px, long py, long r, Point p, Hit& best) const {
        if (r == 0) {
            visit_cell(px, py, p, best);
            return;
        }
        for (long cx = px - r; cx <= px + r; ++cx) {
            visit_cell(cx, py - r, p, best);
            visit_cell(cx, py + r, p, best);
        }
        for (long cy = py - r + 1; cy <= py + r - 1; ++cy) {
            visit_cell(px - r, cy, p, best);
            visit_cell(px + r, cy, p, best);
        }
    }

    std::vector<SegmentRef> segs_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
    BBox box_;
    double cell_ = 1.0;
};

}  // namespace mapcons
