#pragma once

// Shortest-path measure: sample n random origin/destination point pairs in
// the bounding-box intersection, snap to the nearest vertex in each graph,
// compare the two shortest paths with Discrete Fréchet and Average Vertical.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mapcons/eval/measures.hpp"
#include "mapcons/frechet.hpp"
#include "mapcons/graph.hpp"
#include "mapcons/graph_paths.hpp"
#include "mapcons/rng.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

struct ShortestPathReport {
    struct Row {
        std::size_t pair_id = 0;
        bool found = false;
        double frechet_m = 0.0;
        double vertical_m = 0.0;
        double length_c_km = 0.0;
        double length_g_km = 0.0;
    };
    struct Summary {
        double min = 0, max = 0, avg = 0, stddev = 0;
    };
    std::vector<Row> pairs;
    double found_fraction = 0.0;
    Summary frechet, vertical, length_c, length_g;
};

namespace detail {

inline ShortestPathReport::Summary summarize(const std::vector<double>& xs) {
    ShortestPathReport::Summary s;
    if (xs.empty()) return s;
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    double sum = 0;
    for (double x : xs) sum += x;
    s.avg = sum / static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - s.avg) * (x - s.avg);
    s.stddev = std::sqrt(var / static_cast<double>(xs.size()));
    return s;
}

}  // namespace detail

inline ShortestPathReport eval_shortest_path(const RoadGraph& c, const RoadGraph& g,
                                             std::size_t n = 500, std::uint64_t seed = 1,
                                             double vertical_delta = 1.0, unsigned threads = 1,
                                             bool vertical_symmetric = false) {
    if (c.vertices().empty() || g.vertices().empty())
        throw std::invalid_argument("eval_shortest_path: empty graph");
    BBox bc = graph_bbox(c), bg = graph_bbox(g);
    BBox box{std::max(bc.min_x, bg.min_x), std::max(bc.min_y, bg.min_y),
             std::min(bc.max_x, bg.max_x), std::min(bc.max_y, bg.max_y)};
    if (!box.valid())
        throw std::invalid_argument("eval_shortest_path: graphs do not overlap");

    // Draw all pairs up front so results are independent of thread count.
    Rng rng(seed);
    std::vector<std::array<Point, 2>> od(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int e = 0; e < 2; ++e)
            od[i][e] = {uniform_range(rng, box.min_x, box.max_x),
                        uniform_range(rng, box.min_y, box.max_y)};

    ShortestPathReport report;
    report.pairs.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        auto& row = report.pairs[i];
        row.pair_id = i;
        VertexId cs = nearest_vertex(c, od[i][0]), ct = nearest_vertex(c, od[i][1]);
        VertexId gs = nearest_vertex(g, od[i][0]), gt = nearest_vertex(g, od[i][1]);
        auto pc = shortest_path(c, cs, ct);
        auto pg = shortest_path(g, gs, gt);
        if (!pc || !pg) return;
        row.found = true;
        row.frechet_m = discrete_frechet(pc->points, pg->points);
        row.vertical_m = average_vertical_distance(std::span<const Point>(pc->points),
                                                   std::span<const Point>(pg->points),
                                                   vertical_delta, vertical_symmetric);
        row.length_c_km = pc->length / 1000.0;
        row.length_g_km = pg->length / 1000.0;
    });

    std::vector<double> fr, vert, lc, lg;
    for (const auto& row : report.pairs)
        if (row.found) {
            fr.push_back(row.frechet_m);
            vert.push_back(row.vertical_m);
            lc.push_back(row.length_c_km);
            lg.push_back(row.length_g_km);
        }
    report.found_fraction = static_cast<double>(fr.size()) / static_cast<double>(n);
    report.frechet = detail::summarize(fr);
    report.vertical = detail::summarize(vert);
    report.length_c = detail::summarize(lc);
    report.length_g = detail::summarize(lg);
    return report;
}

}  // namespace mapcons
