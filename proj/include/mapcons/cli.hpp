#pragma once

// Command-line surface: stats, construct, eval, synth, bench.
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapcons/construct/params.hpp"
#include "mapcons/graph_io.hpp"
#include "mapcons/harness/benchmark.hpp"
#include "mapcons/harness/synthetic.hpp"
#include "mapcons/track_io.hpp"

namespace mapcons::cli {

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"road map construction and evaluation from vehicle GPS tracks"};
    app.require_subcommand(1);
    unsigned threads = 1;
    app.add_option("--threads", threads, "worker thread cap for evaluation loops")
        ->capture_default_str();

    // ---- stats
    auto* stats_cmd = app.add_subcommand("stats", "dataset statistics for a track directory");
    std::string stats_dir;
    bool stats_json = false;
    stats_cmd->add_option("tracks-dir", stats_dir, "directory of trip_<id>.txt files")->required();
    stats_cmd->add_flag("--json", stats_json, "machine-readable output");

    // ---- construct
    auto* con_cmd = app.add_subcommand("construct", "construct a map from tracks");
    std::string con_algo, con_tracks, con_out;
    ConstructParams params;
    con_cmd->add_option("--algo", con_algo,
                        "incremental | cao | kde | kmeans | tracebundle")
        ->required();
    con_cmd->add_option("tracks-dir", con_tracks, "directory of trip_<id>.txt files")->required();
    con_cmd->add_option("out-dir", con_out, "output map directory")->required();
    con_cmd->add_option("--epsilon", params.epsilon_m,
                        "incremental matching distance (m); published runs used 180/90/170/80")
        ->capture_default_str();
    con_cmd->add_option("--clarify-radius", params.clarify_radius_m, "cao attraction radius (m)")
        ->capture_default_str();
    con_cmd->add_option("--clarify-iterations", params.clarify_iterations,
                        "cao attraction iterations")
        ->capture_default_str();
    con_cmd->add_option("--clarify-damping", params.clarify_damping, "cao displacement damping")
        ->capture_default_str();
    con_cmd->add_option("--proximity", params.proximity_m,
                        "merge distance (m); cao insertion / tracebundle clustering")
        ->capture_default_str();
    con_cmd->add_option("--bearing", params.bearing_deg, "heading tolerance (degrees)")
        ->capture_default_str();
    auto* cell_opt = con_cmd->add_option("--cell", params.cell_m, "kde grid cell size (m)")
                         ->capture_default_str();
    con_cmd->add_option("--blur", params.blur_sigma_cells, "kde gaussian sigma (cells)")
        ->capture_default_str();
    con_cmd->add_option("--threshold", params.threshold, "kde density threshold")
        ->capture_default_str();
    con_cmd->add_flag("--multi-threshold", params.multi_threshold,
                      "kde: union skeletons from a descending threshold ladder");
    con_cmd->add_option("--seed-spacing", params.seed_spacing_m, "kmeans seed spacing (m)")
        ->capture_default_str();
    con_cmd->add_option("--merge-proximity", params.merge_proximity_m,
                        "kmeans center merge distance (m)")
        ->capture_default_str();
    con_cmd->add_option("--turn-angle", params.turn_angle_deg,
                        "tracebundle turn threshold (degrees)")
        ->capture_default_str();
    con_cmd->add_option("--speed-max", params.speed_max_kmh, "tracebundle speed gate (km/h)")
        ->capture_default_str();

    // ---- eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a constructed map against ground truth");
    std::string ev_measure, ev_c, ev_g, ev_out;
    double ev_delta = 1.0, ev_tau = 0.5;
    int ev_k = 3;
    std::size_t ev_pairs = 500;
    GraphSamplingParams gs;
    std::uint64_t ev_seed = 1;
    bool ev_json = false, ev_unmodified = false;
    eval_cmd->add_option("--measure", ev_measure,
                         "hausdorff | pathbased | shortestpath | graphsampling")
        ->required();
    eval_cmd->add_option("constructed", ev_c, "constructed map directory")->required();
    eval_cmd->add_option("ground-truth", ev_g, "ground-truth map directory")->required();
    eval_cmd->add_option("--out", ev_out, "directory for CSV + JSON report files");
    eval_cmd->add_option("--delta", ev_delta, "sampling pitch (m)")->capture_default_str();
    eval_cmd->add_option("--tau", ev_tau, "Fréchet bisection tolerance (m)")
        ->capture_default_str();
    eval_cmd->add_option("--k", ev_k, "link-path length for pathbased")->capture_default_str();
    eval_cmd->add_option("--pairs", ev_pairs, "shortest-path O/D pairs")->capture_default_str();
    eval_cmd->add_option("--density", gs.density_m, "graphsampling sample pitch (m)")
        ->capture_default_str();
    eval_cmd->add_option("--matched-dist", gs.matched_dist_m,
                         "graphsampling marble-hole match distance (m)")
        ->capture_default_str();
    eval_cmd->add_option("--radius", gs.radius_m, "graphsampling exploration radius (m)")
        ->capture_default_str();
    eval_cmd->add_option("--runs", gs.runs, "graphsampling root locations")->capture_default_str();
    eval_cmd->add_flag("--unmodified", ev_unmodified,
                       "graphsampling: keep roots without ground-truth correspondence");
    bool ev_vertical_symmetric = false;
    eval_cmd->add_flag("--vertical-symmetric", ev_vertical_symmetric,
                       "shortestpath: symmetric Average Vertical distance");
    eval_cmd->add_option("--seed", ev_seed, "random seed")->capture_default_str();
    eval_cmd->add_flag("--json", ev_json, "machine-readable output");

    // ---- synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic city and tracks");
    std::string sy_out;
    SyntheticSpec spec;
    synth_cmd->add_option("out-dir", sy_out, "output directory (truth/ and tracks/)")->required();
    synth_cmd->add_option("--rows", spec.rows, "grid rows")->capture_default_str();
    synth_cmd->add_option("--cols", spec.cols, "grid cols")->capture_default_str();
    synth_cmd->add_option("--spacing", spec.spacing_m, "grid spacing (m)")->capture_default_str();
    synth_cmd->add_option("--tracks", spec.n_tracks, "number of tracks")->capture_default_str();
    synth_cmd->add_option("--noise", spec.noise_sigma_m, "gaussian noise sigma (m)")
        ->capture_default_str();
    synth_cmd->add_option("--dt", spec.dt_s, "sampling interval (s)")->capture_default_str();
    synth_cmd->add_option("--speed", spec.speed_kmh, "vehicle speed (km/h)")
        ->capture_default_str();
    synth_cmd->add_option("--seed", spec.seed, "random seed")->capture_default_str();

    // ---- bench
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark config");
    std::string bench_config;
    bench_cmd->add_option("config", bench_config, "JSON benchmark config")->required();

    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector as a stack
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (*stats_cmd) {
            auto res = load_tracks(stats_dir);
            for (const auto& w : res.warnings)
                err << "warning: " << w.file << (w.line ? ":" + std::to_string(w.line) : "")
                    << ": " << w.message << "\n";
            auto s = dataset_stats(res.tracks);
            if (stats_json) {
                json j{{"tracks", s.track_count},
                       {"mean_sampling_s", s.mean_sampling_s},
                       {"total_length_km", s.total_length_km},
                       {"mean_speed_kmh", s.mean_speed_kmh}};
                out << j.dump(2) << "\n";
            } else {
                out << "tracks " << s.track_count << "\n"
                    << "mean_sampling_s " << format_fixed(s.mean_sampling_s, 3) << "\n"
                    << "total_length_km " << format_fixed(s.total_length_km, 3) << "\n"
                    << "mean_speed_kmh " << format_fixed(s.mean_speed_kmh, 3) << "\n";
            }
            return 0;
        }

        if (*con_cmd) {
            params.algorithm = algorithm_from_name(con_algo);
            if (params.algorithm == Algorithm::kde && params.multi_threshold && !cell_opt->count())
                params.cell_m = 50.0;  // published multi-threshold runs used 50 m cells
            params.validate();
            auto loaded = load_tracks(con_tracks);
            for (const auto& w : loaded.warnings)
                err << "warning: " << w.file << ": " << w.message << "\n";
            RoadGraph g = run_constructor(params, loaded.tracks);
            write_graph_dir(g, con_out);
            DatasetSpec ds;
            ds.name = con_tracks;
            AlgoSpec algo;
            algo.name = con_algo;
            algo.params = params;
            std::ofstream mf(std::filesystem::path(con_out) / "manifest.txt");
            mf << manifest_text(ds, algo, 0);
            auto s = graph_stats(g);
            out << "vertices " << s.vertex_count << "\nedges " << s.edge_count << "\nlength_km "
                << format_fixed(s.total_length_km, 3) << "\n";
            return 0;
        }

        if (*eval_cmd) {
            RoadGraph c = read_graph_dir(ev_c);
            RoadGraph g = read_graph_dir(ev_g);
            namespace fs = std::filesystem;
            if (!ev_out.empty()) fs::create_directories(ev_out);
            auto base = [&](const std::string& stem) {
                return (fs::path(ev_out) / stem).string();
            };
            if (ev_measure == "hausdorff") {
                auto rep = eval_directed_hausdorff(c, g, ev_delta);
                if (!ev_out.empty())
                    write_hausdorff_report(rep, base("hausdorff.csv"),
                                           base("hausdorff.summary.json"), "");
                if (ev_json)
                    out << json{{"max_m", rep.max_m}}.dump(2) << "\n";
                else
                    out << format_fixed(rep.max_m, 3) << "\n";
            } else if (ev_measure == "pathbased") {
                auto rep = eval_path_based(c, g, ev_k, ev_tau, threads);
                if (!ev_out.empty())
                    write_path_based_report(rep, base("pathbased.csv"),
                                            base("pathbased.summary.json"), "");
                if (ev_json) {
                    json j{{"min_m", rep.min_m},
                           {"max_m", rep.max_m},
                           {"median_m", rep.median_m},
                           {"avg_m", rep.avg_m}};
                    for (const auto& [d, v] : rep.outlier_m)
                        j["outlier_m"][std::to_string(d)] = v;
                    out << j.dump(2) << "\n";
                } else {
                    out << "min " << format_fixed(rep.min_m, 3) << "\nmax "
                        << format_fixed(rep.max_m, 3) << "\nmedian "
                        << format_fixed(rep.median_m, 3) << "\navg " << format_fixed(rep.avg_m, 3)
                        << "\n";
                    for (const auto& [d, v] : rep.outlier_m)
                        out << d << "% " << format_fixed(v, 3) << "\n";
                }
            } else if (ev_measure == "shortestpath") {
                auto rep = eval_shortest_path(c, g, ev_pairs, ev_seed, ev_delta, threads,
                                              ev_vertical_symmetric);
                if (!ev_out.empty())
                    write_shortest_path_report(rep, base("shortestpath.csv"),
                                               base("shortestpath.summary.json"), "");
                if (ev_json) {
                    json j{{"found_fraction", rep.found_fraction},
                           {"frechet_avg_m", rep.frechet.avg},
                           {"frechet_max_m", rep.frechet.max},
                           {"vertical_avg_m", rep.vertical.avg}};
                    out << j.dump(2) << "\n";
                } else {
                    out << "found " << format_fixed(100 * rep.found_fraction, 1) << "%\n"
                        << "frechet_avg_m " << format_fixed(rep.frechet.avg, 3) << "\n"
                        << "frechet_max_m " << format_fixed(rep.frechet.max, 3) << "\n"
                        << "vertical_avg_m " << format_fixed(rep.vertical.avg, 3) << "\n";
                }
            } else if (ev_measure == "graphsampling") {
                gs.seed = ev_seed;
                gs.modified = !ev_unmodified;
                auto rep = eval_graph_sampling(c, g, gs);
                if (!ev_out.empty())
                    write_graph_sampling_report(rep, base("graphsampling.csv"),
                                                base("graphsampling.summary.json"), "");
                if (ev_json) {
                    json j{{"precision", rep.precision},
                           {"recall", rep.recall},
                           {"f_score", rep.f_score}};
                    out << j.dump(2) << "\n";
                } else {
                    out << "precision " << format_fixed(rep.precision, 3) << "\n"
                        << "recall " << format_fixed(rep.recall, 3) << "\n"
                        << "F-score " << format_fixed(rep.f_score, 3) << "\n";
                }
            } else {
                err << "unknown measure: " << ev_measure << "\n";
                return 2;
            }
            return 0;
        }

        if (*synth_cmd) {
            auto city = gen_synthetic(spec);
            namespace fs = std::filesystem;
            write_graph_dir(city.graph, (fs::path(sy_out) / "truth").string());
            write_tracks(city.tracks, (fs::path(sy_out) / "tracks").string());
            out << "tracks " << city.tracks.size() << "\nvertices "
                << city.graph.vertices().size() << "\nedges " << city.graph.edges().size() << "\n";
            return 0;
        }

        if (*bench_cmd) {
            std::ifstream in(bench_config);
            if (!in) throw std::runtime_error("cannot open config: " + bench_config);
            json j = json::parse(in);
            auto cfg = parse_benchmark_config(j);
            if (threads > 1) cfg.threads = threads;
            auto result = run_benchmark(cfg);
            for (const auto& cell : result.cells) {
                out << cell.dataset << '/' << cell.algorithm;
                if (!cell.measure.empty()) out << '/' << cell.measure;
                out << ": " << (cell.ok ? "ok" : "FAILED " + cell.error) << "\n";
            }
            out << "summary: " << (std::filesystem::path(cfg.output_dir) / "summary.csv").string()
                << "\n";
            if (result.all_failed()) return 1;
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace mapcons::cli
