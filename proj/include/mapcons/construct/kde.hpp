#pragma once

// KDE construction: rasterize per-track density on a cell grid, Gaussian
// blur, threshold to a bitmap, thin to a one-cell skeleton (Zhang-Suen),
// prune short spurs, and vectorize skeleton pixels into a graph (junction
// pixel clusters become vertices, pixel chains become polyline edges).
// The multi-threshold variant unions skeletons from a descending threshold
// ladder before vectorization.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/track.hpp"

namespace mapcons {

namespace kde_detail {

struct Raster {
    long w = 0, h = 0;
    double cell = 1.0;
    double x0 = 0, y0 = 0;

    std::size_t idx(long cx, long cy) const {
        return static_cast<std::size_t>(cy) * static_cast<std::size_t>(w) +
               static_cast<std::size_t>(cx);
    }
    bool inside(long cx, long cy) const { return cx >= 0 && cx < w && cy >= 0 && cy < h; }
    Point center(long cx, long cy) const {
        return {x0 + (cx + 0.5) * cell, y0 + (cy + 0.5) * cell};
    }
};

inline std::vector<double> rasterize(const Raster& r, std::span<const Track> tracks) {
    std::vector<double> density(static_cast<std::size_t>(r.w * r.h), 0.0);
    for (const auto& t : tracks) {
        std::set<std::size_t> cells;  // each cell counted once per track
        auto pts = t.points();
        std::vector<Point> clean;
        for (Point p : pts)
            if (clean.empty() || dist2(clean.back(), p) > 0) clean.push_back(p);
        if (clean.size() < 2) {
            if (!clean.empty()) {
                long cx = static_cast<long>(std::floor((clean[0].x - r.x0) / r.cell));
                long cy = static_cast<long>(std::floor((clean[0].y - r.y0) / r.cell));
                if (r.inside(cx, cy)) cells.insert(r.idx(cx, cy));
            }
        } else {
            PolyLine line(clean);
            for (Point p : line.sample_points(r.cell / 3.0)) {
                long cx = static_cast<long>(std::floor((p.x - r.x0) / r.cell));
                long cy = static_cast<long>(std::floor((p.y - r.y0) / r.cell));
                if (r.inside(cx, cy)) cells.insert(r.idx(cx, cy));
            }
        }
        for (std::size_t c : cells) density[c] += 1.0;
    }
    return density;
}

inline void gaussian_blur(const Raster& r, std::vector<double>& grid, double sigma) {
    if (sigma <= 0) return;
    int rad = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * rad + 1);
    double sum = 0;
    for (int k = -rad; k <= rad; ++k) {
        kernel[k + rad] = std::exp(-0.5 * k * k / (sigma * sigma));
        sum += kernel[k + rad];
    }
    for (double& k : kernel) k /= sum;

    std::vector<double> tmp(grid.size(), 0.0);
    for (long cy = 0; cy < r.h; ++cy)
        for (long cx = 0; cx < r.w; ++cx) {
            double acc = 0;
            for (int k = -rad; k <= rad; ++k) {
                long x = std::clamp(cx + k, 0L, r.w - 1);
                acc += grid[r.idx(x, cy)] * kernel[k + rad];
            }
            tmp[r.idx(cx, cy)] = acc;
        }
    for (long cy = 0; cy < r.h; ++cy)
        for (long cx = 0; cx < r.w; ++cx) {
            double acc = 0;
            for (int k = -rad; k <= rad; ++k) {
                long y = std::clamp(cy + k, 0L, r.h - 1);
                acc += tmp[r.idx(cx, y)] * kernel[k + rad];
            }
            grid[r.idx(cx, cy)] = acc;
        }
}

// Zhang-Suen thinning to a one-cell-wide skeleton.
inline void thin(const Raster& r, std::vector<std::uint8_t>& img) {
    auto at = [&](long cx, long cy) -> std::uint8_t {
        return r.inside(cx, cy) ? img[r.idx(cx, cy)] : 0;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int phase = 0; phase < 2; ++phase) {
            std::vector<std::size_t> kill;
            for (long cy = 0; cy < r.h; ++cy)
                for (long cx = 0; cx < r.w; ++cx) {
                    if (!at(cx, cy)) continue;
                    int p2 = at(cx, cy + 1), p3 = at(cx + 1, cy + 1), p4 = at(cx + 1, cy);
                    int p5 = at(cx + 1, cy - 1), p6 = at(cx, cy - 1), p7 = at(cx - 1, cy - 1);
                    int p8 = at(cx - 1, cy), p9 = at(cx - 1, cy + 1);
                    int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
                    if (b < 2 || b > 6) continue;
                    int a = (p2 == 0 && p3 == 1) + (p3 == 0 && p4 == 1) + (p4 == 0 && p5 == 1) +
                            (p5 == 0 && p6 == 1) + (p6 == 0 && p7 == 1) + (p7 == 0 && p8 == 1) +
                            (p8 == 0 && p9 == 1) + (p9 == 0 && p2 == 1);
                    if (a != 1) continue;
                    if (phase == 0) {
                        if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
                    } else {
                        if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
                    }
                    kill.push_back(r.idx(cx, cy));
                }
            if (!kill.empty()) changed = true;
            for (std::size_t i : kill) img[i] = 0;
        }
    }
}

inline int neighbor_count(const Raster& r, const std::vector<std::uint8_t>& img, long cx,
                          long cy) {
    int n = 0;
    for (long dy = -1; dy <= 1; ++dy)
        for (long dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (r.inside(cx + dx, cy + dy) && img[r.idx(cx + dx, cy + dy)]) ++n;
        }
    return n;
}

// Removes dangling chains shorter than min_len cells that end at a junction.
inline void prune_spurs(const Raster& r, std::vector<std::uint8_t>& img, int min_len) {
    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (long cy = 0; cy < r.h; ++cy)
            for (long cx = 0; cx < r.w; ++cx) {
                if (!img[r.idx(cx, cy)] || neighbor_count(r, img, cx, cy) != 1) continue;
                std::vector<std::size_t> chain{r.idx(cx, cy)};
                long px = cx, py = cy, fx = -1, fy = -1;
                bool is_spur = false;
                while (static_cast<int>(chain.size()) < min_len) {
                    long nx = -1, ny = -1;
                    for (long dy = -1; dy <= 1 && nx < 0; ++dy)
                        for (long dx = -1; dx <= 1; ++dx) {
                            if (dx == 0 && dy == 0) continue;
                            long qx = px + dx, qy = py + dy;
                            if (!r.inside(qx, qy) || !img[r.idx(qx, qy)]) continue;
                            if (qx == fx && qy == fy) continue;
                            nx = qx;
                            ny = qy;
                            break;
                        }
                    if (nx < 0) break;  // open chain, not a spur
                    int deg = neighbor_count(r, img, nx, ny);
                    if (deg > 2) {
                        is_spur = true;  // reached a junction
                        break;
                    }
                    chain.push_back(r.idx(nx, ny));
                    fx = px;
                    fy = py;
                    px = nx;
                    py = ny;
                }
                if (is_spur) {
                    for (std::size_t i : chain) img[i] = 0;
                    changed = true;
                }
            }
        if (!changed) break;
    }
    // lone pixels left behind
    for (long cy = 0; cy < r.h; ++cy)
        for (long cx = 0; cx < r.w; ++cx)
            if (img[r.idx(cx, cy)] && neighbor_count(r, img, cx, cy) == 0) img[r.idx(cx, cy)] = 0;
}

inline RoadGraph vectorize(const Raster& r, const std::vector<std::uint8_t>& img) {
    RoadGraph g;
    const long w = r.w, h = r.h;
    auto on = [&](long cx, long cy) { return r.inside(cx, cy) && img[r.idx(cx, cy)]; };

    std::vector<int> degree(img.size(), -1);
    for (long cy = 0; cy < h; ++cy)
        for (long cx = 0; cx < w; ++cx)
            if (on(cx, cy)) degree[r.idx(cx, cy)] = neighbor_count(r, img, cx, cy);

    // Junction pixels (degree >= 3) clustered by 8-connectivity -> one vertex.
    std::vector<long> pixel_vertex(img.size(), -1);
    auto is_junction = [&](long cx, long cy) { return on(cx, cy) && degree[r.idx(cx, cy)] >= 3; };
    for (long cy = 0; cy < h; ++cy)
        for (long cx = 0; cx < w; ++cx) {
            if (!is_junction(cx, cy) || pixel_vertex[r.idx(cx, cy)] >= 0) continue;
            std::vector<std::pair<long, long>> members, stack{{cx, cy}};
            pixel_vertex[r.idx(cx, cy)] = -2;  // in progress
            while (!stack.empty()) {
                auto [px, py] = stack.back();
                stack.pop_back();
                members.push_back({px, py});
                for (long dy = -1; dy <= 1; ++dy)
                    for (long dx = -1; dx <= 1; ++dx) {
                        long qx = px + dx, qy = py + dy;
                        if ((dx || dy) && is_junction(qx, qy) &&
                            pixel_vertex[r.idx(qx, qy)] == -1) {
                            pixel_vertex[r.idx(qx, qy)] = -2;
                            stack.push_back({qx, qy});
                        }
                    }
            }
            Point centroid{0, 0};
            for (auto [px, py] : members) centroid = centroid + r.center(px, py);
            centroid = centroid * (1.0 / static_cast<double>(members.size()));
            VertexId vid = g.add_vertex(centroid);
            for (auto [px, py] : members) pixel_vertex[r.idx(px, py)] = vid;
        }

    // Endpoint pixels become vertices of their own.
    for (long cy = 0; cy < h; ++cy)
        for (long cx = 0; cx < w; ++cx)
            if (on(cx, cy) && degree[r.idx(cx, cy)] == 1 && pixel_vertex[r.idx(cx, cy)] < 0)
                pixel_vertex[r.idx(cx, cy)] = g.add_vertex(r.center(cx, cy));

    std::vector<std::uint8_t> used(img.size(), 0);

    // Walk a chain starting from a vertex pixel through chain pixel (sx, sy).
    auto trace = [&](long vx, long vy, long sx, long sy) {
        VertexId a = static_cast<VertexId>(pixel_vertex[r.idx(vx, vy)]);
        std::vector<Point> geom{g.vertex(a)};
        long px = sx, py = sy, fx = vx, fy = vy;
        while (true) {
            geom.push_back(r.center(px, py));
            if (pixel_vertex[r.idx(px, py)] >= 0 && degree[r.idx(px, py)] == 1) {
                VertexId b = static_cast<VertexId>(pixel_vertex[r.idx(px, py)]);
                geom.back() = g.vertex(b);
                if (geom.size() >= 2 && polyline_length(geom) > 0) g.add_edge(a, b, PolyLine(geom));
                return;
            }
            used[r.idx(px, py)] = 1;
            long nx = -1, ny = -1;
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    long qx = px + dx, qy = py + dy;
                    if (!on(qx, qy) || (qx == fx && qy == fy)) continue;
                    if (is_junction(qx, qy)) {
                        VertexId b = static_cast<VertexId>(pixel_vertex[r.idx(qx, qy)]);
                        geom.push_back(g.vertex(b));
                        if (polyline_length(geom) > 0) g.add_edge(a, b, PolyLine(geom));
                        return;
                    }
                    if (!used[r.idx(qx, qy)]) {
                        nx = qx;
                        ny = qy;
                    }
                }
            if (nx < 0) return;  // dead end into already-used pixels
            fx = px;
            fy = py;
            px = nx;
            py = ny;
        }
    };

    // Chains emanating from junction clusters.
    for (long cy = 0; cy < h; ++cy)
        for (long cx = 0; cx < w; ++cx) {
            if (!is_junction(cx, cy)) continue;
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    long qx = cx + dx, qy = cy + dy;
                    if (!on(qx, qy) || is_junction(qx, qy) || used[r.idx(qx, qy)]) continue;
                    trace(cx, cy, qx, qy);
                }
        }
    // Open chains between endpoints with no junction.
    for (long cy = 0; cy < h; ++cy)
        for (long cx = 0; cx < w; ++cx) {
            if (!on(cx, cy) || degree[r.idx(cx, cy)] != 1) continue;
            if (used[r.idx(cx, cy)]) continue;
            used[r.idx(cx, cy)] = 1;
            // step to the single neighbor, then trace from this endpoint vertex
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    long qx = cx + dx, qy = cy + dy;
                    if (on(qx, qy) && !used[r.idx(qx, qy)] && !is_junction(qx, qy))
                        trace(cx, cy, qx, qy);
                }
        }
    // Remaining pixels are pure cycles: anchor two vertices and split.
    for (long cy = 0; cy < h; ++cy)
        for (long cx = 0; cx < w; ++cx) {
            if (!on(cx, cy) || used[r.idx(cx, cy)] || degree[r.idx(cx, cy)] != 2) continue;
            if (pixel_vertex[r.idx(cx, cy)] >= 0) continue;
            std::vector<std::pair<long, long>> loop{{cx, cy}};
            used[r.idx(cx, cy)] = 1;
            long px = cx, py = cy, fx = -1, fy = -1;
            for (;;) {
                long nx = -1, ny = -1;
                for (long dy = -1; dy <= 1 && nx < 0; ++dy)
                    for (long dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        long qx = px + dx, qy = py + dy;
                        if (!on(qx, qy) || (qx == fx && qy == fy) || used[r.idx(qx, qy)]) continue;
                        nx = qx;
                        ny = qy;
                        break;
                    }
                if (nx < 0) break;
                used[r.idx(nx, ny)] = 1;
                loop.push_back({nx, ny});
                fx = px;
                fy = py;
                px = nx;
                py = ny;
            }
            if (loop.size() < 4) continue;
            std::size_t half = loop.size() / 2;
            VertexId va = g.add_vertex(r.center(loop[0].first, loop[0].second));
            VertexId vb = g.add_vertex(r.center(loop[half].first, loop[half].second));
            std::vector<Point> g1, g2;
            for (std::size_t i = 0; i <= half; ++i)
                g1.push_back(r.center(loop[i].first, loop[i].second));
            for (std::size_t i = half; i < loop.size(); ++i)
                g2.push_back(r.center(loop[i].first, loop[i].second));
            g2.push_back(r.center(loop[0].first, loop[0].second));
            g.add_edge(va, vb, PolyLine(g1));
            g.add_edge(vb, va, PolyLine(g2));
        }
    return g;
}

}  // namespace kde_detail

inline RoadGraph construct_kde(std::span<const Track> tracks, double cell_m = 16.0,
                               double blur_sigma_cells = 1.0, double threshold = 5.0,
                               bool multi_threshold = false,
                               std::vector<std::string>* warnings = nullptr) {
    if (tracks.empty()) throw std::invalid_argument("construct_kde: no tracks");
    if (cell_m <= 0 || threshold <= 0)
        throw std::invalid_argument("construct_kde: cell and threshold must be > 0");

    BBox box;
    for (const auto& t : tracks)
        for (const auto& m : t.measurements) box.add(m.point);
    if (!box.valid()) throw std::invalid_argument("construct_kde: no measurements");

    kde_detail::Raster r;
    r.cell = cell_m;
    long margin = static_cast<long>(std::ceil(3.0 * blur_sigma_cells)) + 2;
    r.x0 = box.min_x - margin * cell_m;
    r.y0 = box.min_y - margin * cell_m;
    r.w = static_cast<long>(std::ceil((box.max_x - r.x0) / cell_m)) + margin + 1;
    r.h = static_cast<long>(std::ceil((box.max_y - r.y0) / cell_m)) + margin + 1;

    auto density = kde_detail::rasterize(r, tracks);
    kde_detail::gaussian_blur(r, density, blur_sigma_cells);
    double max_density = 0;
    for (double d : density) max_density = std::max(max_density, d);

    std::vector<double> ladder{threshold};
    if (multi_threshold) ladder = {threshold * 4, threshold * 2, threshold};

    std::vector<std::uint8_t> skeleton(density.size(), 0);
    bool any_level = false;
    for (double level : ladder) {
        if (level > max_density) continue;
        std::vector<std::uint8_t> bitmap(density.size(), 0);
        for (std::size_t i = 0; i < density.size(); ++i) bitmap[i] = density[i] >= level ? 1 : 0;
        kde_detail::thin(r, bitmap);
        for (std::size_t i = 0; i < density.size(); ++i)
            if (bitmap[i]) skeleton[i] = 1;
        any_level = true;
    }
    if (!any_level) {
        if (warnings)
            warnings->push_back("threshold exceeds maximum density; returning empty graph");
        return RoadGraph{};
    }
    if (multi_threshold) kde_detail::thin(r, skeleton);  // union may be wide where levels overlap
    kde_detail::prune_spurs(r, skeleton, 5);
    return kde_detail::vectorize(r, skeleton);
}

}  // namespace mapcons
