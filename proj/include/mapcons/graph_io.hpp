#pragma once

// Map file I/O.
// Vertex file: one `id,x,y` record per line (decimal meters, no header).
// Edge file: `id,u,v[,x1 y1 x2 y2 ...]` where the optional trailing field is
// the interior geometry; absent geometry means the straight segment u -> v.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcons/graph.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

inline bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

inline bool parse_int(const std::string& s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e;
}

[[noreturn]] inline void parse_fail(const std::string& file, std::size_t line,
                                    const std::string& what) {
    throw std::runtime_error(file + ":" + std::to_string(line) + ": " + what);
}

inline std::string chomp(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

}  // namespace detail

inline RoadGraph read_graph(const std::string& vertex_file, const std::string& edge_file) {
    RoadGraph g;
    std::ifstream vf(vertex_file);
    if (!vf) throw std::runtime_error("cannot open vertex file: " + vertex_file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(vf, line)) {
        ++lineno;
        line = detail::chomp(line);
        if (line.empty()) continue;
        auto fields = detail::split(line, ',');
        if (fields.size() != 3)
            detail::parse_fail(vertex_file, lineno, "expected id,x,y");
        std::int64_t id;
        double x, y;
        if (!detail::parse_int(fields[0], id) || !detail::parse_double(fields[1], x) ||
            !detail::parse_double(fields[2], y))
            detail::parse_fail(vertex_file, lineno, "malformed vertex record");
        if (g.has_vertex(id))
            detail::parse_fail(vertex_file, lineno, "duplicate vertex id " + std::to_string(id));
        g.add_vertex(id, {x, y});
    }

    std::ifstream ef(edge_file);
    if (!ef) throw std::runtime_error("cannot open edge file: " + edge_file);
    lineno = 0;
    std::set<EdgeId> seen;
    while (std::getline(ef, line)) {
        ++lineno;
        line = detail::chomp(line);
        if (line.empty()) continue;
        auto fields = detail::split(line, ',');
        if (fields.size() < 3 || fields.size() > 4)
            detail::parse_fail(edge_file, lineno, "expected id,u,v[,geometry]");
        std::int64_t id, u, v;
        if (!detail::parse_int(fields[0], id) || !detail::parse_int(fields[1], u) ||
            !detail::parse_int(fields[2], v))
            detail::parse_fail(edge_file, lineno, "malformed edge record");
        if (!seen.insert(id).second)
            detail::parse_fail(edge_file, lineno, "duplicate edge id " + std::to_string(id));
        if (!g.has_vertex(u) || !g.has_vertex(v))
            detail::parse_fail(edge_file, lineno, "edge references missing vertex");
        std::vector<Point> pts{g.vertex(u)};
        if (fields.size() == 4 && !fields[3].empty()) {
            std::istringstream geom(fields[3]);
            std::vector<double> nums;
            double val;
            while (geom >> val) nums.push_back(val);
            if (!geom.eof())
                detail::parse_fail(edge_file, lineno, "malformed geometry field");
            if (nums.size() % 2 != 0)
                detail::parse_fail(edge_file, lineno, "odd coordinate count in geometry field");
            for (std::size_t i = 0; i < nums.size(); i += 2)
                pts.push_back({nums[i], nums[i + 1]});
        }
        pts.push_back(g.vertex(v));
        try {
            g.add_edge(u, v, PolyLine(std::move(pts)), id);
        } catch (const std::invalid_argument& e) {
            detail::parse_fail(edge_file, lineno, e.what());
        }
    }
    return g;
}

inline void write_graph(const RoadGraph& g, const std::string& vertex_file,
                        const std::string& edge_file) {
    std::ofstream vf(vertex_file);
    if (!vf) throw std::runtime_error("cannot write vertex file: " + vertex_file);
    for (const auto& [id, p] : g.vertices())
        vf << id << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';

    std::vector<const RoadEdge*> ordered;
    for (const auto& e : g.edges()) ordered.push_back(&e);
    std::sort(ordered.begin(), ordered.end(),
              [](const RoadEdge* a, const RoadEdge* b) { return a->id < b->id; });

    std::ofstream ef(edge_file);
    if (!ef) throw std::runtime_error("cannot write edge file: " + edge_file);
    for (const RoadEdge* e : ordered) {
        ef << e->id << ',' << e->u << ',' << e->v;
        const auto& pts = e->geometry.points();
        if (pts.size() > 2) {
            ef << ',';
            for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
                if (i > 1) ef << ' ';
                ef << format_double(pts[i].x) << ' ' << format_double(pts[i].y);
            }
        }
        ef << '\n';
    }
}

// Convention: a map on disk is a directory holding vertices.txt + edges.txt.
inline RoadGraph read_graph_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    return read_graph((fs::path(dir) / "vertices.txt").string(),
                      (fs::path(dir) / "edges.txt").string());
}

inline void write_graph_dir(const RoadGraph& g, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_graph(g, (fs::path(dir) / "vertices.txt").string(),
                (fs::path(dir) / "edges.txt").string());
}

}  // namespace mapcons
