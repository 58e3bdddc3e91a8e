#include <catch2/catch_amalgamated.hpp>

#include "mapcons/construct/cao.hpp"
#include "mapcons/construct/incremental_frechet.hpp"
#include "mapcons/construct/kde.hpp"
#include "mapcons/construct/kmeans.hpp"
#include "mapcons/construct/tracebundle.hpp"
#include "mapcons/eval/measures.hpp"
#include "mapcons/harness/synthetic.hpp"
#include "mapcons/hausdorff.hpp"

using namespace mapcons;

namespace {

Track straight_track(Point from, Point to, double step_m, double speed_ms = 10.0,
                     const std::string& id = "0") {
    Track t;
    t.id = id;
    double len = dist(from, to);
    Point dir = (to - from) * (1.0 / len);
    for (double a = 0;; a += step_m) {
        bool done = a >= len;
        double arc = done ? len : a;
        t.measurements.push_back({from + dir * arc, arc / speed_ms, {}, {}});
        if (done) break;
    }
    return t;
}

std::vector<PolyLine> graph_lines(const RoadGraph& g) { return edge_polylines(g); }

std::size_t component_count(const RoadGraph& g) {
    std::map<VertexId, VertexId> parent;
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [id, p] : g.vertices()) parent[id] = id;
    for (const auto& e : g.edges()) parent[find(e.u)] = find(e.v);
    std::set<VertexId> roots;
    for (const auto& [id, p] : g.vertices()) roots.insert(find(id));
    return roots.size();
}

}  // namespace

TEST_CASE("incremental frechet: single track becomes its own chain") {
    std::vector<Track> tracks{straight_track({0, 0}, {500, 0}, 50)};
    auto g = construct_incremental_frechet(tracks, 30.0);
    CHECK(validate_graph(g).empty());
    CHECK(g.edges().size() == 1);
    CHECK(g.vertices().size() == 2);
    CHECK(g.total_length() == Catch::Approx(500.0));
}

TEST_CASE("incremental frechet: identical second track adds nothing") {
    std::vector<Track> tracks{straight_track({0, 0}, {500, 0}, 50, 10, "a"),
                              straight_track({0, 0}, {500, 0}, 50, 10, "b")};
    auto g1 = construct_incremental_frechet({tracks.data(), 1}, 30.0);
    auto g2 = construct_incremental_frechet(tracks, 30.0);
    CHECK(g2.vertices().size() == g1.vertices().size());
    CHECK(g2.edges().size() == g1.edges().size());
    CHECK(g2.total_length() == Catch::Approx(g1.total_length()));
}

TEST_CASE("incremental frechet: tracks offset beyond eps stay disjoint") {
    const double eps = 20.0;
    std::vector<Track> tracks{straight_track({0, 0}, {500, 0}, 50, 10, "a"),
                              straight_track({0, 2 * eps}, {500, 2 * eps}, 50, 10, "b")};
    auto g = construct_incremental_frechet(tracks, eps);
    CHECK(validate_graph(g).empty());
    CHECK(g.edges().size() == 2);
    CHECK(component_count(g) == 2);

    // free-space oracle: no monotone passage between the chains at eps
    PolyLine a({{0, 0}, {500, 0}}), b({{0, 2 * eps}, {500, 2 * eps}});
    CHECK_FALSE(frechet_decision(a, b, eps));
}

TEST_CASE("incremental frechet: branching track attaches to the trunk") {
    std::vector<Track> tracks{straight_track({0, 0}, {600, 0}, 50, 10, "a")};
    // second track follows the trunk then turns north
    Track turn;
    turn.id = "b";
    double tt = 0;
    for (double x = 0; x <= 300; x += 50, tt += 5) turn.measurements.push_back({{x, 0}, tt, {}, {}});
    for (double y = 50; y <= 400; y += 50, tt += 5)
        turn.measurements.push_back({{300, y}, tt, {}, {}});
    tracks.push_back(turn);

    auto g = construct_incremental_frechet(tracks, 25.0);
    CHECK(validate_graph(g).empty());
    CHECK(component_count(g) == 1);
    // the inserted branch must cover the northward street
    std::vector<PolyLine> branch{PolyLine({{300, 0}, {300, 400}})};
    auto lines = graph_lines(g);
    CHECK(directed_hausdorff(branch, lines, 1.0) < 25.0 + 1e-9);
}

TEST_CASE("incremental frechet is idempotent on represented tracks") {
    SyntheticSpec spec;
    spec.n_tracks = 12;
    spec.seed = 5;
    auto city = gen_synthetic(spec);
    auto g1 = construct_incremental_frechet(city.tracks, 30.0);
    std::size_t v1 = g1.vertices().size(), e1 = g1.edges().size();
    // re-inserting every track must add nothing
    std::vector<Track> doubled = city.tracks;
    for (const auto& t : city.tracks) doubled.push_back(t);
    auto g2 = construct_incremental_frechet(doubled, 30.0);
    CHECK(g2.vertices().size() == v1);
    CHECK(g2.edges().size() == e1);
}

TEST_CASE("clarify_tracks pulls parallel tracks together") {
    auto mk = [](double y, const std::string& id) {
        Track t = straight_track({0, y}, {400, y}, 20, 10, id);
        return t;
    };
    std::vector<Track> tracks{mk(0, "a"), mk(10, "b")};

    auto separation = [](const std::vector<Track>& ts) {
        double sum = 0;
        std::size_t n = 0;
        for (const auto& m : ts[0].measurements) {
            std::vector<Point> other;
            for (const auto& o : ts[1].measurements) other.push_back(o.point);
            sum += point_to_polyline_distance(m.point, std::span<const Point>(other));
            ++n;
        }
        return sum / static_cast<double>(n);
    };

    double prev = separation(tracks);
    CHECK(prev == Catch::Approx(10.0));
    for (int iters = 1; iters <= 3; ++iters) {
        auto out = clarify_tracks(tracks, 20.0, iters, 0.3);
        REQUIRE(out.size() == 2);
        REQUIRE(out[0].measurements.size() == tracks[0].measurements.size());
        double sep = separation(out);
        CHECK(sep < prev - 1e-6);
        prev = sep;
    }
}

TEST_CASE("clarify_tracks leaves a lone track unchanged") {
    std::vector<Track> tracks{straight_track({0, 0}, {300, 0}, 30)};
    auto out = clarify_tracks(tracks, 25.0, 3, 0.5);
    for (std::size_t i = 0; i < tracks[0].measurements.size(); ++i) {
        CHECK(out[0].measurements[i].point.x == tracks[0].measurements[i].point.x);
        CHECK(out[0].measurements[i].point.y == tracks[0].measurements[i].point.y);
    }
}

TEST_CASE("clarify_tracks locality: crossing tracks unchanged beyond radius") {
    std::vector<Track> tracks{straight_track({-200, 0}, {200, 0}, 20, 10, "a"),
                              straight_track({0, -200}, {0, 200}, 20, 10, "b")};
    auto out = clarify_tracks(tracks, 20.0, 3, 0.5);
    for (std::size_t ti = 0; ti < 2; ++ti)
        for (std::size_t mi = 0; mi < tracks[ti].measurements.size(); ++mi) {
            Point orig = tracks[ti].measurements[mi].point;
            if (dist(orig, {0, 0}) <= 40) continue;  // near the crossing region
            CHECK(dist(out[ti].measurements[mi].point, orig) == Catch::Approx(0.0).margin(1e-12));
        }
}

TEST_CASE("incremental local: single track forms a chain") {
    std::vector<Track> tracks{straight_track({0, 0}, {500, 0}, 100)};
    auto g = construct_incremental_local(tracks, 20.0, 45.0);
    CHECK(validate_graph(g).empty());
    CHECK(g.vertices().size() == 6);
    CHECK(g.edges().size() == 5);
}

TEST_CASE("incremental local: identical second track merges fully") {
    std::vector<Track> tracks{straight_track({0, 0}, {500, 0}, 100, 10, "a"),
                              straight_track({0, 0}, {500, 0}, 100, 10, "b")};
    auto g1 = construct_incremental_local({tracks.data(), 1}, 20.0, 45.0);
    auto g2 = construct_incremental_local(tracks, 20.0, 45.0);
    CHECK(g2.vertices().size() == g1.vertices().size());
}

TEST_CASE("incremental local: perpendicular crossing does not merge") {
    std::vector<Track> tracks{straight_track({-200, 0}, {200, 0}, 100, 10, "a"),
                              straight_track({0, -200}, {0, 200}, 100, 10, "b")};
    auto g = construct_incremental_local(tracks, 20.0, 45.0);
    // all of track b's measurements became fresh vertices
    CHECK(g.vertices().size() == 10);
    CHECK(validate_graph(g).empty());
}

TEST_CASE("kde: straight corridor yields a two-endpoint chain") {
    std::vector<Track> tracks;
    for (int i = 0; i < 50; ++i)
        tracks.push_back(straight_track({0, 0}, {1000, 0}, 16, 10, std::to_string(i)));
    auto g = construct_kde(tracks, 16.0, 1.0, 10.0);
    CHECK(validate_graph(g).empty());
    REQUIRE(!g.edges().empty());
    std::size_t deg1 = 0;
    for (const auto& [vid, p] : g.vertices())
        if (g.degree(vid) == 1) ++deg1;
    CHECK(deg1 == 2);

    std::vector<PolyLine> truth{PolyLine({{0, 0}, {1000, 0}})};
    double dh = directed_hausdorff(graph_lines(g), truth, 1.0);
    CHECK(dh <= 16.0 * std::sqrt(2.0) + 1e-9);
}

TEST_CASE("kde: threshold above density yields an empty graph with a warning") {
    std::vector<Track> tracks;
    for (int i = 0; i < 50; ++i)
        tracks.push_back(straight_track({0, 0}, {500, 0}, 16, 10, std::to_string(i)));
    std::vector<std::string> warnings;
    auto g = construct_kde(tracks, 16.0, 1.0, 1000.0, false, &warnings);
    CHECK(g.empty());
    REQUIRE(!warnings.empty());
}

TEST_CASE("kde: crossing corridors produce one degree-4 junction") {
    std::vector<Track> tracks;
    for (int i = 0; i < 50; ++i) {
        tracks.push_back(straight_track({-400, 0}, {400, 0}, 16, 10, "h" + std::to_string(i)));
        tracks.push_back(straight_track({0, -400}, {0, 400}, 16, 10, "v" + std::to_string(i)));
    }
    auto g = construct_kde(tracks, 16.0, 1.0, 10.0);
    CHECK(validate_graph(g).empty());
    std::size_t deg4 = 0, junctions = 0;
    for (const auto& [vid, p] : g.vertices()) {
        if (g.degree(vid) == 4) ++deg4;
        if (g.degree(vid) >= 3) ++junctions;
    }
    CHECK(deg4 == 1);
    CHECK(junctions == 1);
}

TEST_CASE("kde multi-threshold unions skeleton levels") {
    std::vector<Track> tracks;
    // busy corridor plus a quiet side street
    for (int i = 0; i < 40; ++i)
        tracks.push_back(straight_track({0, 0}, {800, 0}, 16, 10, "m" + std::to_string(i)));
    for (int i = 0; i < 6; ++i)
        tracks.push_back(straight_track({400, 0}, {400, 600}, 16, 10, "s" + std::to_string(i)));
    auto low = construct_kde(tracks, 16.0, 1.0, 2.0, false);
    auto multi = construct_kde(tracks, 16.0, 1.0, 2.0, true);
    CHECK(validate_graph(multi).empty());
    // the side street survives in both; multi-threshold must not lose it
    std::vector<PolyLine> side{PolyLine({{400, 50}, {400, 550}})};
    CHECK(directed_hausdorff(side, graph_lines(multi), 1.0) <= 32.0);
    CHECK(directed_hausdorff(side, graph_lines(low), 1.0) <= 32.0);
}

TEST_CASE("kmeans: straight track yields a collinear chain") {
    std::vector<Track> tracks{straight_track({0, 0}, {500, 0}, 10)};
    auto g = construct_kmeans(tracks, 50.0, 45.0, 50.0);
    CHECK(validate_graph(g).empty());
    CHECK(g.vertices().size() >= 9);
    CHECK(g.vertices().size() <= 11);
    for (const auto& [vid, p] : g.vertices()) CHECK(std::abs(p.y) < 1e-6);
    // chain: all degrees 1 or 2
    for (const auto& [vid, p] : g.vertices()) CHECK(g.degree(vid) <= 2);
    CHECK(component_count(g) == 1);
}

TEST_CASE("kmeans: opposite directions stay separate chains") {
    Track east = straight_track({0, 0}, {500, 0}, 10, 10, "e");
    Track west = straight_track({500, 3}, {0, 3}, 10, 10, "w");
    std::vector<Track> tracks{east, west};
    auto g = construct_kmeans(tracks, 50.0, 45.0, 50.0);
    CHECK(validate_graph(g).empty());
    CHECK(component_count(g) == 2);  // heading gate keeps directions apart
}

TEST_CASE("kmeans: no dangling edges after empty-cluster removal") {
    SyntheticSpec spec;
    spec.n_tracks = 30;
    spec.noise_sigma_m = 2.0;
    spec.seed = 11;
    auto city = gen_synthetic(spec);
    auto g = construct_kmeans(city.tracks, 50.0, 45.0, 50.0);
    CHECK(validate_graph(g).empty());
}

TEST_CASE("tracebundle: turn detection thresholds") {
    // one 90-degree turn; arms long enough for the bearing window
    auto mk_turn = [](double speed_kmh) {
        Track t;
        t.id = "t";
        double v = speed_kmh / 3.6;
        double tt = 0;
        for (double x = -400; x < 0; x += 50, tt += 50 / v)
            t.measurements.push_back({{x, 0}, tt, {}, {}});
        t.measurements.push_back({{0, 0}, tt, {}, {}});
        for (double y = 50; y <= 400; y += 50)
            t.measurements.push_back({{0, y}, tt += 50 / v, {}, {}});
        return t;
    };
    TraceBundleOptions opt;
    auto slow = detect_turns(mk_turn(20.0), 0, opt);
    REQUIRE(slow.size() == 1);
    CHECK(slow[0].pos.x == Catch::Approx(0.0).margin(1e-9));
    CHECK(slow[0].pos.y == Catch::Approx(0.0).margin(1e-9));

    auto fast = detect_turns(mk_turn(60.0), 0, opt);
    CHECK(fast.empty());  // speed gate

    std::vector<Track> straight{straight_track({0, 0}, {800, 0}, 50)};
    CHECK(detect_turns(straight[0], 0, opt).empty());
}

TEST_CASE("tracebundle: straight tracks produce chain-only fallback") {
    std::vector<Track> tracks{straight_track({0, 0}, {800, 0}, 50)};
    std::vector<std::string> warnings;
    auto g = construct_tracebundle(tracks, {}, &warnings);
    CHECK(validate_graph(g).empty());
    REQUIRE(!warnings.empty());
    CHECK(g.edges().size() == 1);
}

TEST_CASE("tracebundle: synthetic city intersections near true crossings") {
    SyntheticSpec spec;
    spec.n_tracks = 200;
    spec.noise_sigma_m = 5.0;
    spec.dt_s = 3.0;
    spec.speed_kmh = 30.0;
    spec.seed = 42;
    auto city = gen_synthetic(spec);

    TraceBundleOptions opt;
    auto g = construct_tracebundle(city.tracks, opt);
    CHECK(validate_graph(g).empty());

    // every turned-at crossing has an intersection vertex within proximity
    for (VertexId t : city.turned_at) {
        Point truth = city.graph.vertex(t);
        double best = 1e18;
        for (const auto& [vid, p] : g.vertices()) best = std::min(best, dist(p, truth));
        CHECK(best <= opt.proximity_m);
    }
    // and no intersection strays far from every true crossing
    for (const auto& [vid, p] : g.vertices()) {
        if (g.degree(vid) == 0 && false) continue;
        double best = 1e18;
        for (const auto& [tid, tp] : city.graph.vertices()) best = std::min(best, dist(p, tp));
        CHECK(best <= 50.0);
    }
}

TEST_CASE("constructors are deterministic") {
    SyntheticSpec spec;
    spec.n_tracks = 40;
    spec.noise_sigma_m = 3.0;
    spec.seed = 17;
    auto city = gen_synthetic(spec);

    auto fingerprint = [](const RoadGraph& g) {
        std::string s;
        for (const auto& [id, p] : g.vertices())
            s += std::to_string(id) + ":" + format_double(p.x) + "," + format_double(p.y) + ";";
        for (const auto& e : g.edges()) {
            s += std::to_string(e.id) + "-" + std::to_string(e.u) + "-" + std::to_string(e.v);
            for (Point p : e.geometry.points()) s += format_double(p.x) + format_double(p.y);
        }
        return fnv1a64(s);
    };

    CHECK(fingerprint(construct_incremental_frechet(city.tracks, 40)) ==
          fingerprint(construct_incremental_frechet(city.tracks, 40)));
    CHECK(fingerprint(construct_kde(city.tracks, 16, 1, 3)) ==
          fingerprint(construct_kde(city.tracks, 16, 1, 3)));
    CHECK(fingerprint(construct_kmeans(city.tracks)) == fingerprint(construct_kmeans(city.tracks)));
    CHECK(fingerprint(construct_tracebundle(city.tracks)) ==
          fingerprint(construct_tracebundle(city.tracks)));
    auto clar1 = clarify_tracks(city.tracks);
    auto clar2 = clarify_tracks(city.tracks);
    CHECK(fingerprint(construct_incremental_local(clar1)) ==
          fingerprint(construct_incremental_local(clar2)));
}

TEST_CASE("kde vectorizes a closed loop") {
    // circular tracks, no junctions anywhere: exercises cycle anchoring
    std::vector<Track> tracks;
    for (int rep = 0; rep < 40; ++rep) {
        Track t;
        t.id = std::to_string(rep);
        for (int k = 0; k <= 72; ++k) {
            double a = 2 * M_PI * k / 72.0;
            t.measurements.push_back({{400 * std::cos(a), 400 * std::sin(a)}, k * 2.0, {}, {}});
        }
        tracks.push_back(t);
    }
    auto g = construct_kde(tracks, 16.0, 1.0, 10.0);
    CHECK(validate_graph(g).empty());
    REQUIRE(!g.edges().empty());
    // loop survives: total length close to the circumference
    CHECK(g.total_length() == Catch::Approx(2 * M_PI * 400).epsilon(0.15));
    // and it is a closed walk: every vertex has even degree
    for (const auto& [vid, p] : g.vertices()) CHECK(g.degree(vid) % 2 == 0);
}
