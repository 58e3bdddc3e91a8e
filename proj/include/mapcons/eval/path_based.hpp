#pragma once

// Path-based distance: map-match every link-k path of C into G with the
// minimal-Fréchet matcher, then aggregate (min/max/median/avg, d%-distances)
// and attribute per-vertex / per-edge local signatures.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "mapcons/eval/surface.hpp"
#include "mapcons/graph.hpp"
#include "mapcons/graph_paths.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

struct PathBasedReport {
    struct Row {
        std::size_t path_id = 0;
        std::size_t links = 0;
        double distance_m = 0.0;
    };
    std::vector<Row> per_path;
    double min_m = 0, max_m = 0, median_m = 0, avg_m = 0;
    std::map<int, double> outlier_m;               // d% -> distance, d in {2,5,10,15}
    std::map<VertexId, double> vertex_signature;   // worst path distance through the vertex
    std::map<EdgeId, double> edge_signature;
};

// Maximum remaining distance after discarding the d% largest values.
inline double outlier_distance(std::vector<double> sorted_desc, int d_percent) {
    std::size_t drop = sorted_desc.size() * static_cast<std::size_t>(d_percent) / 100;
    if (drop >= sorted_desc.size()) return 0.0;
    return sorted_desc[drop];
}

inline PathBasedReport eval_path_based(const RoadGraph& c, const RoadGraph& g, int k = 3,
                                       double tau = 0.5, unsigned threads = 1) {
    if (g.edges().empty()) throw std::invalid_argument("eval_path_based: empty ground truth");
    auto paths = enumerate_link_paths(c, k);
    if (paths.empty()) throw std::invalid_argument("eval_path_based: C has no paths");

    GraphMatcher matcher(g);
    std::vector<double> distances(paths.size());
    parallel_for(paths.size(), threads, [&](std::size_t i) {
        // C is undirected: evaluate both orientations, keep the smaller.
        PolyLine fwd(paths[i].points);
        double a = matcher.min_frechet(fwd, tau);
        double b = matcher.min_frechet(fwd.reversed(), tau);
        distances[i] = std::min(a, b);
    });

    PathBasedReport report;
    std::map<EdgeId, std::pair<VertexId, VertexId>> edge_ends;
    for (const auto& e : c.edges()) edge_ends[e.id] = {e.u, e.v};
    for (std::size_t i = 0; i < paths.size(); ++i) {
        report.per_path.push_back({i, paths[i].steps.size(), distances[i]});
        for (const auto& s : paths[i].steps) {
            auto& sig = report.edge_signature[s.edge];
            sig = std::max(sig, distances[i]);
            auto [u, v] = edge_ends.at(s.edge);
            auto& su = report.vertex_signature[u];
            su = std::max(su, distances[i]);
            auto& sv = report.vertex_signature[v];
            sv = std::max(sv, distances[i]);
        }
    }

    std::vector<double> sorted = distances;
    std::sort(sorted.begin(), sorted.end());
    report.min_m = sorted.front();
    report.max_m = sorted.back();
    std::size_t n = sorted.size();
    report.median_m = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    double sum = 0;
    for (double d : sorted) sum += d;
    report.avg_m = sum / static_cast<double>(n);
    std::vector<double> desc(sorted.rbegin(), sorted.rend());
    for (int d : {2, 5, 10, 15}) report.outlier_m[d] = outlier_distance(desc, d);
    return report;
}

}  // namespace mapcons
