#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "mapcons/graph.hpp"
#include "mapcons/graph_io.hpp"
#include "mapcons/graph_paths.hpp"
#include "mapcons/rng.hpp"

using namespace mapcons;
namespace fs = std::filesystem;

namespace {

RoadGraph square_ring(double side = 100.0) {
    RoadGraph g;
    g.add_vertex(0, {0, 0});
    g.add_vertex(1, {side, 0});
    g.add_vertex(2, {side, side});
    g.add_vertex(3, {0, side});
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    return g;
}

RoadGraph grid_graph(int rows, int cols, double spacing) {
    RoadGraph g;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g.add_vertex(r * cols + c, {c * spacing, r * spacing});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(r * cols + c, r * cols + c + 1);
            if (r + 1 < rows) g.add_edge(r * cols + c, (r + 1) * cols + c);
        }
    return g;
}

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "mapcons_graph_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("validate_graph") {
    RoadGraph ok;
    ok.add_vertex(0, {0, 0});
    ok.add_vertex(1, {10, 0});
    ok.add_edge(0, 1);
    CHECK(validate_graph(ok).empty());

    RoadGraph dangling = ok;
    dangling.add_edge(0, 7, PolyLine({{0, 0}, {5, 5}}));
    auto v1 = validate_graph(dangling);
    REQUIRE(v1.size() == 1);
    CHECK(v1[0].rule == "dangling-endpoint");

    RoadGraph mismatch = ok;
    mismatch.add_edge(0, 1, PolyLine({{0, 5}, {10, 0}}));  // start 5 m off vertex 0
    auto v2 = validate_graph(mismatch);
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].rule == "geometry-mismatch");
}

TEST_CASE("graph_stats") {
    CHECK(graph_stats(RoadGraph{}).vertex_count == 0);
    CHECK(graph_stats(RoadGraph{}).edge_count == 0);
    CHECK(graph_stats(RoadGraph{}).total_length_km == 0.0);

    auto s = graph_stats(square_ring());
    CHECK(s.vertex_count == 4);
    CHECK(s.edge_count == 4);
    CHECK(s.total_length_km == Catch::Approx(0.4));
}

TEST_CASE("nearest_vertex") {
    RoadGraph g;
    g.add_vertex(3, {0, 0});
    g.add_vertex(7, {10, 0});
    g.add_vertex(9, {100, 100});
    CHECK(nearest_vertex(g, {0, 0}) == 3);
    CHECK(nearest_vertex(g, {5, 0}) == 3);  // equidistant to 3 and 7, smaller id wins
    CHECK(nearest_vertex(g, {9, 1}) == 7);
    CHECK_THROWS_AS(nearest_vertex(RoadGraph{}, {0, 0}), std::invalid_argument);

    // brute-force cross-check on a random graph
    Rng rng(31);
    RoadGraph r;
    for (int i = 0; i < 30; ++i)
        r.add_vertex(i, {uniform_range(rng, 0, 500), uniform_range(rng, 0, 500)});
    for (int rep = 0; rep < 25; ++rep) {
        Point p{uniform_range(rng, 0, 500), uniform_range(rng, 0, 500)};
        VertexId got = nearest_vertex(r, p);
        VertexId want = 0;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [id, pos] : r.vertices())
            if (dist(p, pos) < best) {
                best = dist(p, pos);
                want = id;
            }
        CHECK(got == want);
    }
}

TEST_CASE("shortest_path basics") {
    auto g = grid_graph(2, 2, 100.0);
    auto p = shortest_path(g, 0, 3);
    REQUIRE(p.has_value());
    CHECK(p->length == Catch::Approx(200.0));
    CHECK(p->steps.size() == 2);

    auto same = shortest_path(g, 1, 1);
    REQUIRE(same.has_value());
    CHECK(same->length == 0.0);
    CHECK(same->steps.empty());

    CHECK_THROWS_AS(shortest_path(g, 0, 99), std::invalid_argument);

    RoadGraph disconnected = g;
    disconnected.add_vertex(50, {1000, 1000});
    CHECK_FALSE(shortest_path(disconnected, 0, 50).has_value());
}

TEST_CASE("shortest_path equals brute-force enumeration on random graphs") {
    Rng rng(37);
    for (int rep = 0; rep < 6; ++rep) {
        RoadGraph g;
        const int n = 12;
        for (int i = 0; i < n; ++i)
            g.add_vertex(i, {uniform_range(rng, 0, 300), uniform_range(rng, 0, 300)});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (uniform01(rng) < 0.25) g.add_edge(i, j);

        // brute force over all simple paths
        auto brute = [&](VertexId s, VertexId t) {
            double best = std::numeric_limits<double>::infinity();
            std::vector<char> vis(n, 0);
            std::function<void(VertexId, double)> dfs = [&](VertexId x, double acc) {
                if (acc >= best) return;
                if (x == t) {
                    best = acc;
                    return;
                }
                vis[x] = 1;
                for (auto [ei, side] : g.incident(x)) {
                    const auto& e = g.edges()[ei];
                    VertexId y = e.u == x ? e.v : e.u;
                    if (!vis[y]) dfs(y, acc + e.geometry.length());
                }
                vis[x] = 0;
            };
            dfs(s, 0.0);
            return best;
        };

        for (int q = 0; q < 8; ++q) {
            VertexId s = static_cast<VertexId>(uniform_index(rng, n));
            VertexId t = static_cast<VertexId>(uniform_index(rng, n));
            auto p = shortest_path(g, s, t);
            double want = s == t ? 0.0 : brute(s, t);
            if (!std::isfinite(want)) {
                CHECK_FALSE(p.has_value());
            } else {
                REQUIRE(p.has_value());
                CHECK(p->length == Catch::Approx(want).margin(1e-9));
                auto back = shortest_path(g, t, s);
                REQUIRE(back.has_value());
                CHECK(back->length == Catch::Approx(p->length).margin(1e-9));
            }
        }
    }
}

TEST_CASE("shortest_path length is monotone under edge deletion") {
    auto g = grid_graph(3, 3, 100.0);
    auto before = shortest_path(g, 0, 8);
    REQUIRE(before.has_value());
    RoadGraph cut = g;
    cut.remove_edge(g.edges()[1].id);
    auto after = shortest_path(cut, 0, 8);
    if (after.has_value()) CHECK(after->length >= before->length - 1e-9);
}

TEST_CASE("enumerate_link_paths on Y graph") {
    RoadGraph y;
    y.add_vertex(0, {0, 0});
    y.add_vertex(1, {100, 0});
    y.add_vertex(2, {-100, 0});
    y.add_vertex(3, {0, 100});
    y.add_edge(0, 1);
    y.add_edge(0, 2);
    y.add_edge(0, 3);

    CHECK(enumerate_link_paths(y, 1).size() == 3);
    auto k2 = enumerate_link_paths(y, 2);
    CHECK(k2.size() == 3);  // leaf-center-leaf, up to reversal
    for (const auto& p : k2) CHECK(p.steps.size() == 2);

    CHECK_THROWS_AS(enumerate_link_paths(y, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_link_paths(y, 4), std::invalid_argument);
}

TEST_CASE("chain through degree-2 vertices is one link") {
    RoadGraph chain;
    chain.add_vertex(0, {0, 0});
    chain.add_vertex(1, {100, 0});
    chain.add_vertex(2, {200, 0});
    chain.add_vertex(3, {300, 0});
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    chain.add_edge(2, 3);

    auto k1 = enumerate_link_paths(chain, 1);
    REQUIRE(k1.size() == 1);
    CHECK(k1[0].steps.size() == 3);  // all three edges in the single link
    CHECK(k1[0].length == Catch::Approx(300.0));

    // shorter-than-k maximal path still emitted
    auto k3 = enumerate_link_paths(chain, 3);
    REQUIRE(k3.size() == 1);
    CHECK(k3[0].steps.size() == 3);
}

TEST_CASE("link-1 paths cover every edge") {
    Rng rng(41);
    for (int rep = 0; rep < 5; ++rep) {
        RoadGraph g;
        const int n = 10;
        for (int i = 0; i < n; ++i)
            g.add_vertex(i, {uniform_range(rng, 0, 200), uniform_range(rng, 0, 200)});
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (uniform01(rng) < 0.2) g.add_edge(i, j);
        if (g.edges().empty()) continue;

        auto paths = enumerate_link_paths(g, 1);
        std::set<EdgeId> covered;
        double total_path_len = 0;
        for (const auto& p : paths) {
            total_path_len += p.length;
            for (const auto& s : p.steps) covered.insert(s.edge);
        }
        CHECK(covered.size() == g.edges().size());
        CHECK(total_path_len >= g.total_length() - 1e-6);

        // every emitted path satisfies the GraphPath invariants
        for (int k = 1; k <= 3; ++k)
            for (const auto& p : enumerate_link_paths(g, k)) {
                std::set<EdgeId> used;
                for (const auto& s : p.steps) CHECK(used.insert(s.edge).second);
            }
    }
}

TEST_CASE("graph file round trip") {
    auto dir = temp_dir();
    auto g = square_ring();
    write_graph_dir(g, dir.string());
    auto back = read_graph_dir(dir.string());
    CHECK(back.vertices().size() == g.vertices().size());
    CHECK(back.edges().size() == g.edges().size());
    for (const auto& [id, p] : g.vertices()) {
        CHECK(back.vertex(id).x == Catch::Approx(p.x).margin(1e-6));
        CHECK(back.vertex(id).y == Catch::Approx(p.y).margin(1e-6));
    }
    CHECK(back.total_length() == Catch::Approx(g.total_length()).margin(1e-6));

    // interior geometry round trip
    RoadGraph curvy;
    curvy.add_vertex(0, {0, 0});
    curvy.add_vertex(1, {10, 0});
    curvy.add_edge(0, 1, PolyLine({{0, 0}, {3.25, 4.125}, {7.5, -2.0}, {10, 0}}));
    write_graph_dir(curvy, dir.string());
    auto curvy2 = read_graph_dir(dir.string());
    REQUIRE(curvy2.edges().size() == 1);
    CHECK(curvy2.edges()[0].geometry.size() == 4);
    CHECK(curvy2.edges()[0].geometry.length() ==
          Catch::Approx(curvy.edges()[0].geometry.length()).margin(1e-6));
}

TEST_CASE("graph file parse errors") {
    auto dir = temp_dir();
    auto vfile = (dir / "bad_vertices.txt").string();
    auto efile = (dir / "bad_edges.txt").string();

    {
        std::ofstream vf(vfile);
        vf << "0,0,0\n1,10,0\n";
        std::ofstream ef(efile);
        ef << "0,0,1,1 2 3\n";  // odd coordinate count in the geometry field
    }
    CHECK_THROWS_WITH(read_graph(vfile, efile),
                      Catch::Matchers::ContainsSubstring(":1:"));

    {
        std::ofstream vf(vfile);
        vf << "0,0,0\n";
        std::ofstream ef(efile);
        ef << "0,0\n";  // too few fields
    }
    CHECK_THROWS_WITH(read_graph(vfile, efile),
                      Catch::Matchers::ContainsSubstring("expected id,u,v"));

    {
        std::ofstream vf(vfile);
        vf << "5,0,0\n5,1,1\n";  // duplicate id 5
        std::ofstream ef(efile);
    }
    CHECK_THROWS_WITH(read_graph(vfile, efile),
                      Catch::Matchers::ContainsSubstring("duplicate vertex id 5"));
}

TEST_CASE("pure degree-2 cycle becomes an anchored self-link") {
    auto ring = square_ring();
    auto k1 = enumerate_link_paths(ring, 1);
    REQUIRE(k1.size() == 1);
    CHECK(k1[0].steps.size() == 4);  // whole ring in one link
    CHECK(k1[0].start == k1[0].end);
    CHECK(k1[0].length == Catch::Approx(400.0));

    // still the only maximal path at larger k
    CHECK(enumerate_link_paths(ring, 3).size() == 1);
}

TEST_CASE("shortest_path breaks length ties by smallest edge-id sequence") {
    // 2x2 grid: two equal-length corner-to-corner routes
    auto g = grid_graph(2, 2, 100.0);
    // edges in creation order: 0:(0,1) 1:(0,2) 2:(1,3) 3:(2,3)
    auto p = shortest_path(g, 0, 3);
    REQUIRE(p.has_value());
    REQUIRE(p->steps.size() == 2);
    CHECK(p->steps[0].edge == g.edges()[0].id);  // route 0-1-3 beats 0-2-3
    CHECK(p->steps[1].edge == g.edges()[2].id);
}
