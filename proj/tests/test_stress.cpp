#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "mapcons/eval/graph_sampling.hpp"
#include "mapcons/eval/surface.hpp"
#include "mapcons/graph_paths.hpp"
#include "mapcons/hausdorff.hpp"
#include "mapcons/rng.hpp"

using namespace mapcons;

namespace {

// Min Fréchet over all vertex-to-vertex simple paths: an upper bound on the
// graph matcher's walk-based minimum (walks may trim first/last edges).
double brute_min_frechet(const PolyLine& p, const RoadGraph& g, double tau) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<char> used(g.edges().size(), 0);
    std::vector<Point> acc;
    std::function<void(VertexId)> dfs = [&](VertexId at) {
        if (acc.size() >= 2) best = std::min(best, frechet_distance(p, PolyLine(acc), tau));
        for (auto [ei, side] : g.incident(at)) {
            if (used[ei]) continue;
            const auto& e = g.edges()[ei];
            VertexId to = e.u == at ? e.v : e.u;
            used[ei] = 1;
            auto saved = acc;
            const auto& pts = e.geometry.points();
            if (e.u == at)
                for (std::size_t i = acc.empty() ? 0 : 1; i < pts.size(); ++i) acc.push_back(pts[i]);
            else
                for (std::size_t i = pts.size() - (acc.empty() ? 0 : 1); i-- > 0;)
                    acc.push_back(pts[i]);
            dfs(to);
            acc = saved;
            used[ei] = 0;
        }
    };
    for (const auto& [vid, pos] : g.vertices()) {
        acc = {pos};
        dfs(vid);
    }
    return best;
}

}  // namespace

TEST_CASE("graph matcher is bracketed by path and point-set oracles") {
    Rng rng(101);
    const double tau = 0.05;
    for (int rep = 0; rep < 12; ++rep) {
        // small random connected-ish graph
        RoadGraph g;
        const int n = 5;
        for (int i = 0; i < n; ++i)
            g.add_vertex(i, {uniform_range(rng, 0, 300), uniform_range(rng, 0, 300)});
        for (int i = 1; i < n; ++i) g.add_edge(i - 1, i);  // spanning chain
        for (int i = 0; i < n; ++i)
            for (int j = i + 2; j < n; ++j)
                if (uniform01(rng) < 0.3) g.add_edge(i, j);

        // random query path
        std::vector<Point> pts;
        std::size_t len = 3 + uniform_index(rng, 3);
        for (std::size_t i = 0; i < len; ++i)
            pts.push_back({uniform_range(rng, 0, 300), uniform_range(rng, 0, 300)});
        PolyLine path(pts);

        GraphMatcher matcher(g);
        double impl = matcher.min_frechet(path, tau);

        // upper bound: best vertex-to-vertex simple path
        double upper = brute_min_frechet(path, g, tau);
        CHECK(impl <= upper + 2 * tau + 1e-9);

        // lower bound: any walk stays on G, so Fréchet >= directed Hausdorff
        std::vector<PolyLine> p{path};
        double lower = directed_hausdorff(p, edge_polylines(g), 0.25);
        CHECK(impl >= lower - 0.125 - tau - 1e-9);

        // decision at the returned value must hold, below it must not
        CHECK(matcher.decision(path.points(), impl + tau));
        if (impl > 2 * tau) CHECK_FALSE(matcher.decision(path.points(), impl - 2 * tau));
    }
}

TEST_CASE("flood sampler places exact network-distance shells") {
    // single edge: distances are |x - offset| only
    RoadGraph line;
    line.add_vertex(0, {0, 0});
    line.add_vertex(1, {100, 0});
    line.add_edge(0, 1);
    detail::GraphFlood flood(line);
    auto samples = flood.samples(0, 30.0, 50.0, 5.0);
    CHECK(samples.size() == 17);  // x in {0,5,...,80}
    for (Point s : samples) {
        double d = std::abs(s.x - 30.0);
        CHECK(std::fmod(d + 1e-9, 5.0) < 2e-9);
        CHECK(d <= 50.0 + 1e-9);
        CHECK(s.y == 0.0);
    }

    // ring: shells wrap around and meet at the antipode exactly once
    RoadGraph ring;
    ring.add_vertex(0, {0, 0});
    ring.add_vertex(1, {100, 0});
    ring.add_vertex(2, {100, 100});
    ring.add_vertex(3, {0, 100});
    ring.add_edge(0, 1);
    ring.add_edge(1, 2);
    ring.add_edge(2, 3);
    ring.add_edge(3, 0);
    detail::GraphFlood rflood(ring);
    auto rsamples = rflood.samples(0, 50.0, 250.0, 5.0);
    // dist spans [0, 200]; k=0 and the antipode k=40 give one point, rest two
    CHECK(rsamples.size() == 80);
}

TEST_CASE("maximum matching equals brute force on small instances") {
    Rng rng(103);
    for (int rep = 0; rep < 60; ++rep) {
        std::size_t nl = 1 + uniform_index(rng, 6), nr = 1 + uniform_index(rng, 6);
        std::vector<std::vector<std::size_t>> adj(nl);
        for (std::size_t l = 0; l < nl; ++l)
            for (std::size_t r = 0; r < nr; ++r)
                if (uniform01(rng) < 0.4) adj[l].push_back(r);

        std::size_t impl = detail::max_bipartite_matching(adj, nr);

        // brute force over all assignments
        std::vector<char> taken(nr, 0);
        std::function<std::size_t(std::size_t)> best = [&](std::size_t l) -> std::size_t {
            if (l == nl) return 0;
            std::size_t r0 = best(l + 1);  // leave l unmatched
            for (std::size_t r : adj[l])
                if (!taken[r]) {
                    taken[r] = 1;
                    r0 = std::max(r0, 1 + best(l + 1));
                    taken[r] = 0;
                }
            return r0;
        };
        CHECK(impl == best(0));
    }
}

TEST_CASE("link enumeration handles parallel edges") {
    // two vertices joined by two parallel edges: a pure two-edge cycle
    RoadGraph g;
    g.add_vertex(0, {0, 0});
    g.add_vertex(1, {100, 0});
    g.add_edge(0, 1, PolyLine({{0, 0}, {50, 20}, {100, 0}}));
    g.add_edge(0, 1, PolyLine({{0, 0}, {50, -20}, {100, 0}}));
    auto k1 = enumerate_link_paths(g, 1);
    REQUIRE(k1.size() == 1);
    CHECK(k1[0].steps.size() == 2);  // whole cycle as the anchored link

    // one spoke: vertex 1 becomes a junction, vertex 0 stays degree 2, so the
    // parallel pair is a single loop link through 0
    g.add_vertex(2, {200, 0});
    g.add_edge(1, 2);
    auto k1b = enumerate_link_paths(g, 1);
    REQUIRE(k1b.size() == 2);

    // spokes at both ends: each parallel edge is now its own link
    g.add_vertex(3, {-100, 0});
    g.add_edge(0, 3);
    auto k1c = enumerate_link_paths(g, 1);
    CHECK(k1c.size() == 4);
    std::set<EdgeId> covered;
    for (const auto& p : k1c)
        for (const auto& s : p.steps) covered.insert(s.edge);
    CHECK(covered.size() == g.edges().size());
}
