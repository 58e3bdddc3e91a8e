#pragma once

// Report serialization: one CSV of detail rows per measure plus a JSON
// summary object. Detail rows carry full precision; summaries use three
// decimals. Every file references the manifest hash of the map it scored.

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "mapcons/eval/graph_sampling.hpp"
#include "mapcons/eval/measures.hpp"
#include "mapcons/eval/path_based.hpp"
#include "mapcons/eval/shortest_path_eval.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

using json = nlohmann::json;

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

inline void write_json(const json& j, const std::string& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace detail

inline void write_hausdorff_report(const HausdorffReport& r, const std::string& csv_path,
                                   const std::string& json_path, const std::string& manifest_hash) {
    auto csv = detail::open_out(csv_path);
    csv << "# manifest=" << manifest_hash << "\n";
    csv << "edge_id,hausdorff_m\n";
    for (const auto& [id, d] : r.per_edge) csv << id << ',' << format_double(d) << '\n';

    json j;
    j["measure"] = "hausdorff";
    j["manifest_hash"] = manifest_hash;
    j["max_m"] = r.max_m;
    j["edges"] = r.per_edge.size();
    detail::write_json(j, json_path);
}

inline void write_path_based_report(const PathBasedReport& r, const std::string& csv_path,
                                    const std::string& json_path,
                                    const std::string& manifest_hash) {
    auto csv = detail::open_out(csv_path);
    csv << "# manifest=" << manifest_hash << "\n";
    csv << "path_id,links,distance_m\n";
    for (const auto& row : r.per_path)
        csv << row.path_id << ',' << row.links << ',' << format_double(row.distance_m) << '\n';

    json j;
    j["measure"] = "pathbased";
    j["manifest_hash"] = manifest_hash;
    j["paths"] = r.per_path.size();
    j["min_m"] = r.min_m;
    j["max_m"] = r.max_m;
    j["median_m"] = r.median_m;
    j["avg_m"] = r.avg_m;
    for (const auto& [d, v] : r.outlier_m) j["outlier_m"][std::to_string(d)] = v;
    json vs = json::object(), es = json::object();
    for (const auto& [id, v] : r.vertex_signature) vs[std::to_string(id)] = v;
    for (const auto& [id, v] : r.edge_signature) es[std::to_string(id)] = v;
    j["vertex_signature_m"] = vs;
    j["edge_signature_m"] = es;
    detail::write_json(j, json_path);
}

inline void write_shortest_path_report(const ShortestPathReport& r, const std::string& csv_path,
                                       const std::string& json_path,
                                       const std::string& manifest_hash) {
    auto csv = detail::open_out(csv_path);
    csv << "# manifest=" << manifest_hash << "\n";
    csv << "pair_id,found,frechet_m,vertical_m,length_c_km,length_g_km\n";
    for (const auto& p : r.pairs) {
        csv << p.pair_id << ',' << (p.found ? 1 : 0) << ',';
        if (p.found)
            csv << format_double(p.frechet_m) << ',' << format_double(p.vertical_m) << ','
                << format_double(p.length_c_km) << ',' << format_double(p.length_g_km);
        else
            csv << ",,,";
        csv << '\n';
    }

    auto summary = [](const ShortestPathReport::Summary& s) {
        return json{{"min", s.min}, {"max", s.max}, {"avg", s.avg}, {"stddev", s.stddev}};
    };
    json j;
    j["measure"] = "shortestpath";
    j["manifest_hash"] = manifest_hash;
    j["pairs"] = r.pairs.size();
    j["found_fraction"] = r.found_fraction;
    j["frechet_m"] = summary(r.frechet);
    j["vertical_m"] = summary(r.vertical);
    j["length_c_km"] = summary(r.length_c);
    j["length_g_km"] = summary(r.length_g);
    detail::write_json(j, json_path);
}

inline void write_graph_sampling_report(const GraphSamplingReport& r, const std::string& csv_path,
                                        const std::string& json_path,
                                        const std::string& manifest_hash) {
    auto csv = detail::open_out(csv_path);
    csv << "# manifest=" << manifest_hash << "\n";
    csv << "run_id,root_x,root_y,marbles,holes,matched\n";
    for (const auto& run : r.runs)
        csv << run.run_id << ',' << format_double(run.root.x) << ',' << format_double(run.root.y)
            << ',' << run.marbles << ',' << run.holes << ',' << run.matched << '\n';

    json j;
    j["measure"] = "graphsampling";
    j["manifest_hash"] = manifest_hash;
    j["runs"] = r.runs.size();
    j["skipped_roots"] = r.skipped_roots;
    j["matched_marbles"] = r.matched_marbles;
    j["spurious_marbles"] = r.spurious_marbles;
    j["matched_holes"] = r.matched_holes;
    j["empty_holes"] = r.empty_holes;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f_score"] = r.f_score;
    detail::write_json(j, json_path);
}

}  // namespace mapcons
