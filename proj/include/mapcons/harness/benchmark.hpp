#pragma once

// Benchmark orchestration over (dataset x algorithm x measure) cells.
// For each algorithm: construct, write the map plus a params manifest, and
// emit a stats row; for each (map, measure): emit detail CSV + summary JSON.
// Cell failures are recorded and do not abort other cells. A master seed
// fans out to per-task seeds by stable name hashing, so adding a task never
// perturbs the randomness of others.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mapcons/construct/cao.hpp"
#include "mapcons/construct/incremental_frechet.hpp"
#include "mapcons/construct/kde.hpp"
#include "mapcons/construct/kmeans.hpp"
#include "mapcons/construct/params.hpp"
#include "mapcons/construct/tracebundle.hpp"
#include "mapcons/graph_io.hpp"
#include "mapcons/harness/reports.hpp"
#include "mapcons/harness/synthetic.hpp"
#include "mapcons/track_io.hpp"

namespace mapcons {

struct DatasetSpec {
    std::string name;
    std::optional<SyntheticSpec> synthetic;
    std::string tracks_dir;        // used when not synthetic
    std::string ground_truth_dir;  // directory with vertices.txt/edges.txt
};

struct AlgoSpec {
    std::string name;  // display name; defaults to the algorithm tag
    bool identity = false;
    ConstructParams params;
};

struct MeasureSpec {
    std::string name;  // hausdorff | pathbased | shortestpath | graphsampling
    double delta_m = 1.0;
    int k = 3;
    double tau_m = 0.5;
    std::size_t pairs = 500;
    GraphSamplingParams sampling;
};

struct BenchmarkConfig {
    std::string output_dir;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;
    std::vector<DatasetSpec> datasets;
    std::vector<AlgoSpec> algorithms;
    std::vector<MeasureSpec> measures;

    void validate() const {
        if (datasets.empty()) throw std::invalid_argument("config: needs at least one dataset");
        if (algorithms.empty()) throw std::invalid_argument("config: needs at least one algorithm");
        if (measures.empty()) throw std::invalid_argument("config: needs at least one measure");
        if (output_dir.empty()) throw std::invalid_argument("config: output dir required");
    }
};

inline BenchmarkConfig parse_benchmark_config(const json& j) {
    BenchmarkConfig cfg;
    cfg.output_dir = j.at("output").get<std::string>();
    cfg.master_seed = j.value("seed", 1ull);
    cfg.threads = j.value("threads", 1u);
    for (const auto& d : j.at("datasets")) {
        DatasetSpec ds;
        ds.name = d.at("name").get<std::string>();
        if (d.contains("synthetic")) {
            const auto& s = d["synthetic"];
            SyntheticSpec spec;
            spec.rows = s.value("rows", spec.rows);
            spec.cols = s.value("cols", spec.cols);
            spec.spacing_m = s.value("spacing_m", spec.spacing_m);
            spec.n_tracks = s.value("n_tracks", spec.n_tracks);
            spec.noise_sigma_m = s.value("noise_sigma_m", spec.noise_sigma_m);
            spec.dt_s = s.value("dt_s", spec.dt_s);
            spec.speed_kmh = s.value("speed_kmh", spec.speed_kmh);
            ds.synthetic = spec;
        } else {
            ds.tracks_dir = d.at("tracks").get<std::string>();
            ds.ground_truth_dir = d.at("ground_truth").get<std::string>();
        }
        cfg.datasets.push_back(std::move(ds));
    }
    for (const auto& a : j.at("algorithms")) {
        AlgoSpec as;
        std::string tag = a.at("algo").get<std::string>();
        if (tag == "identity") {
            as.identity = true;
            as.name = "identity";
        } else {
            as.params.algorithm = algorithm_from_name(tag);
            as.name = tag;
        }
        auto& p = as.params;
        p.epsilon_m = a.value("epsilon", p.epsilon_m);
        p.clarify_radius_m = a.value("clarify_radius", p.clarify_radius_m);
        p.clarify_iterations = a.value("clarify_iterations", p.clarify_iterations);
        p.clarify_damping = a.value("clarify_damping", p.clarify_damping);
        p.proximity_m = a.value("proximity", p.proximity_m);
        p.bearing_deg = a.value("bearing", p.bearing_deg);
        p.cell_m = a.value("cell", p.cell_m);
        p.blur_sigma_cells = a.value("blur", p.blur_sigma_cells);
        p.threshold = a.value("threshold", p.threshold);
        p.multi_threshold = a.value("multi_threshold", p.multi_threshold);
        p.seed_spacing_m = a.value("seed_spacing", p.seed_spacing_m);
        p.merge_proximity_m = a.value("merge_proximity", p.merge_proximity_m);
        p.turn_angle_deg = a.value("turn_angle", p.turn_angle_deg);
        p.speed_max_kmh = a.value("speed_max", p.speed_max_kmh);
        p.cluster_proximity_m = a.value("tb_proximity", p.cluster_proximity_m);
        if (a.contains("name")) as.name = a["name"].get<std::string>();
        if (!as.identity) as.params.validate();
        cfg.algorithms.push_back(std::move(as));
    }
    for (const auto& m : j.at("measures")) {
        MeasureSpec ms;
        ms.name = m.at("measure").get<std::string>();
        ms.delta_m = m.value("delta", ms.delta_m);
        ms.k = m.value("k", ms.k);
        ms.tau_m = m.value("tau", ms.tau_m);
        ms.pairs = m.value("pairs", ms.pairs);
        ms.sampling.density_m = m.value("density", ms.sampling.density_m);
        ms.sampling.matched_dist_m = m.value("matched_dist", ms.sampling.matched_dist_m);
        ms.sampling.radius_m = m.value("radius", ms.sampling.radius_m);
        ms.sampling.runs = m.value("runs", ms.sampling.runs);
        ms.sampling.modified = m.value("modified", ms.sampling.modified);
        cfg.measures.push_back(std::move(ms));
    }
    cfg.validate();
    return cfg;
}

inline RoadGraph run_constructor(const ConstructParams& p, std::span<const Track> tracks) {
    switch (p.algorithm) {
        case Algorithm::incremental:
            return construct_incremental_frechet(tracks, p.epsilon_m);
        case Algorithm::cao: {
            auto clarified =
                clarify_tracks(tracks, p.clarify_radius_m, p.clarify_iterations,
                               p.clarify_damping, p.bearing_deg);
            return construct_incremental_local(clarified, p.proximity_m, p.bearing_deg);
        }
        case Algorithm::kde:
            return construct_kde(tracks, p.cell_m, p.blur_sigma_cells, p.threshold,
                                 p.multi_threshold);
        case Algorithm::kmeans:
            return construct_kmeans(tracks, p.seed_spacing_m, p.bearing_deg,
                                    p.merge_proximity_m);
        case Algorithm::tracebundle: {
            TraceBundleOptions opt;
            opt.turn_angle_deg = p.turn_angle_deg;
            opt.speed_max_kmh = p.speed_max_kmh;
            opt.proximity_m = p.cluster_proximity_m;
            return construct_tracebundle(tracks, opt);
        }
    }
    throw std::logic_error("run_constructor: unhandled algorithm");
}

inline std::string manifest_text(const DatasetSpec& ds, const AlgoSpec& algo,
                                 std::uint64_t master_seed) {
    std::map<std::string, std::string> kv;
    kv["dataset"] = ds.name;
    kv["algorithm"] = algo.name;
    kv["master_seed"] = std::to_string(master_seed);
    const auto& p = algo.params;
    if (algo.identity) {
        kv["identity"] = "1";
    } else {
        switch (p.algorithm) {
            case Algorithm::incremental:
                kv["epsilon"] = format_double(p.epsilon_m);
                break;
            case Algorithm::cao:
                kv["clarify_radius"] = format_double(p.clarify_radius_m);
                kv["clarify_iterations"] = std::to_string(p.clarify_iterations);
                kv["clarify_damping"] = format_double(p.clarify_damping);
                kv["proximity"] = format_double(p.proximity_m);
                kv["bearing"] = format_double(p.bearing_deg);
                break;
            case Algorithm::kde:
                kv["cell"] = format_double(p.cell_m);
                kv["blur"] = format_double(p.blur_sigma_cells);
                kv["threshold"] = format_double(p.threshold);
                kv["multi_threshold"] = p.multi_threshold ? "1" : "0";
                break;
            case Algorithm::kmeans:
                kv["seed_spacing"] = format_double(p.seed_spacing_m);
                kv["bearing"] = format_double(p.bearing_deg);
                kv["merge_proximity"] = format_double(p.merge_proximity_m);
                break;
            case Algorithm::tracebundle:
                kv["turn_angle"] = format_double(p.turn_angle_deg);
                kv["speed_max"] = format_double(p.speed_max_kmh);
                kv["proximity"] = format_double(p.cluster_proximity_m);
                break;
        }
    }
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

struct BenchmarkResult {
    struct Cell {
        std::string dataset, algorithm, measure;  // measure empty for construct cells
        bool ok = false;
        std::string error;
    };
    std::vector<Cell> cells;
    std::size_t failures = 0;
    bool all_failed() const { return !cells.empty() && failures == cells.size(); }
};

inline BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
    namespace fs = std::filesystem;
    cfg.validate();
    fs::create_directories(cfg.output_dir);
    BenchmarkResult result;

    struct SummaryRow {
        std::string dataset, algorithm, status;
        GraphStats stats{};
        std::map<std::string, std::string> headline;
    };
    std::vector<SummaryRow> summary;

    for (const auto& ds : cfg.datasets) {
        RoadGraph truth;
        std::vector<Track> tracks;
        try {
            if (ds.synthetic) {
                SyntheticSpec spec = *ds.synthetic;
                spec.seed = task_seed(cfg.master_seed, ds.name + "|synthetic");
                auto city = gen_synthetic(spec);
                truth = std::move(city.graph);
                tracks = std::move(city.tracks);
                fs::path dsdir = fs::path(cfg.output_dir) / ds.name;
                write_graph_dir(truth, (dsdir / "truth").string());
                write_tracks(tracks, (dsdir / "tracks").string());
            } else {
                auto loaded = load_tracks(ds.tracks_dir);
                tracks = std::move(loaded.tracks);
                truth = read_graph_dir(ds.ground_truth_dir);
            }
        } catch (const std::exception& e) {
            for (const auto& algo : cfg.algorithms) {
                result.cells.push_back({ds.name, algo.name, "", false, e.what()});
                ++result.failures;
                summary.push_back({ds.name, algo.name, std::string("dataset-error"), {}, {}});
            }
            continue;
        }

        for (const auto& algo : cfg.algorithms) {
            fs::path cell_dir = fs::path(cfg.output_dir) / ds.name / algo.name;
            SummaryRow row;
            row.dataset = ds.name;
            row.algorithm = algo.name;

            RoadGraph constructed;
            std::string manifest_hash;
            try {
                constructed = algo.identity ? truth : run_constructor(algo.params, tracks);
                write_graph_dir(constructed, cell_dir.string());
                std::string manifest = manifest_text(ds, algo, cfg.master_seed);
                {
                    std::ofstream mf(cell_dir / "manifest.txt");
                    mf << manifest;
                }
                char hex[32];
                std::snprintf(hex, sizeof(hex), "%016llx",
                              static_cast<unsigned long long>(fnv1a64(manifest)));
                manifest_hash = hex;
                row.stats = graph_stats(constructed);
                row.status = "ok";
                result.cells.push_back({ds.name, algo.name, "", true, ""});
            } catch (const std::exception& e) {
                result.cells.push_back({ds.name, algo.name, "", false, e.what()});
                ++result.failures;
                row.status = std::string("construct-error: ") + e.what();
                summary.push_back(std::move(row));
                continue;
            }

            for (const auto& ms : cfg.measures) {
                std::string base = (cell_dir / ms.name).string();
                std::uint64_t seed =
                    task_seed(cfg.master_seed, ds.name + "|" + algo.name + "|" + ms.name);
                try {
                    if (ms.name == "hausdorff") {
                        auto rep = eval_directed_hausdorff(constructed, truth, ms.delta_m);
                        write_hausdorff_report(rep, base + ".csv", base + ".summary.json",
                                               manifest_hash);
                        row.headline["hausdorff_max_m"] = format_fixed(rep.max_m, 3);
                    } else if (ms.name == "pathbased") {
                        auto rep =
                            eval_path_based(constructed, truth, ms.k, ms.tau_m, cfg.threads);
                        write_path_based_report(rep, base + ".csv", base + ".summary.json",
                                                manifest_hash);
                        row.headline["pathbased_max_m"] = format_fixed(rep.max_m, 3);
                        row.headline["pathbased_5pct_m"] = format_fixed(rep.outlier_m.at(5), 3);
                    } else if (ms.name == "shortestpath") {
                        auto rep = eval_shortest_path(constructed, truth, ms.pairs, seed,
                                                      ms.delta_m, cfg.threads);
                        write_shortest_path_report(rep, base + ".csv", base + ".summary.json",
                                                   manifest_hash);
                        row.headline["sp_found"] = format_fixed(rep.found_fraction, 3);
                        row.headline["sp_frechet_avg_m"] = format_fixed(rep.frechet.avg, 3);
                    } else if (ms.name == "graphsampling") {
                        GraphSamplingParams params = ms.sampling;
                        params.seed = seed;
                        auto rep = eval_graph_sampling(constructed, truth, params);
                        write_graph_sampling_report(rep, base + ".csv", base + ".summary.json",
                                                    manifest_hash);
                        row.headline["gs_precision"] = format_fixed(rep.precision, 3);
                        row.headline["gs_recall"] = format_fixed(rep.recall, 3);
                        row.headline["gs_fscore"] = format_fixed(rep.f_score, 3);
                    } else {
                        throw std::invalid_argument("unknown measure: " + ms.name);
                    }
                    result.cells.push_back({ds.name, algo.name, ms.name, true, ""});
                } catch (const std::exception& e) {
                    result.cells.push_back({ds.name, algo.name, ms.name, false, e.what()});
                    ++result.failures;
                    row.headline[ms.name + "_error"] = e.what();
                }
            }
            summary.push_back(std::move(row));
        }
    }

    // Combined summary table.
    std::vector<std::string> headline_cols;
    for (const char* c : {"hausdorff_max_m", "pathbased_max_m", "pathbased_5pct_m", "sp_found",
                          "sp_frechet_avg_m", "gs_precision", "gs_recall", "gs_fscore"})
        headline_cols.push_back(c);
    std::ofstream sf(fs::path(cfg.output_dir) / "summary.csv");
    sf << "dataset,algorithm,status,vertices,edges,length_km";
    for (const auto& c : headline_cols) sf << ',' << c;
    sf << '\n';
    for (const auto& row : summary) {
        sf << row.dataset << ',' << row.algorithm << ',' << row.status << ',' << row.stats.vertex_count
           << ',' << row.stats.edge_count << ',' << format_fixed(row.stats.total_length_km, 3);
        for (const auto& c : headline_cols) {
            auto it = row.headline.find(c);
            sf << ',' << (it == row.headline.end() ? std::string() : it->second);
        }
        sf << '\n';
    }
    return result;
}

}  // namespace mapcons
