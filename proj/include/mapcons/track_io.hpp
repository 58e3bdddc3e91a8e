#pragma once

// Track files: one measurement per line, `x y t [heading [speed]]`,
// whitespace-separated; one file per track, named trip_<id>.txt.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcons/track.hpp"
#include "mapcons/util.hpp"

namespace mapcons {

enum class TimestampPolicy {
    drop_measurement,  // drop offenders, record a warning
    fail,
};

struct LoadWarning {
    std::string file;
    std::size_t line = 0;  // 0 when the warning concerns the whole file
    std::string message;
};

struct LoadResult {
    std::vector<Track> tracks;  // lexicographic file-name order
    std::vector<LoadWarning> warnings;
};

inline Track parse_track_file(const std::string& path, const std::string& id,
                              std::vector<LoadWarning>& warnings,
                              TimestampPolicy policy = TimestampPolicy::drop_measurement) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open track file: " + path);
    Track track;
    track.id = id;
    std::string line;
    std::size_t lineno = 0;
    bool maybe_degrees = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        Measurement m;
        if (!(ss >> m.point.x >> m.point.y >> m.t))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected `x y t [heading [speed]]`");
        double heading, speed;
        if (ss >> heading) {
            if (heading < 0 || heading >= 360)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": heading out of [0,360)");
            m.heading = heading;
            if (ss >> speed) {
                if (speed < 0)
                    throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                             ": negative speed");
                m.speed = speed;
            }
        }
        std::string rest;
        if (ss >> rest)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": trailing fields");
        if (!std::isfinite(m.point.x) || !std::isfinite(m.point.y) || !std::isfinite(m.t))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-finite value");

        if (std::abs(m.point.x) > 180 || std::abs(m.point.y) > 90) maybe_degrees = false;

        if (!track.measurements.empty() && m.t <= track.measurements.back().t) {
            if (policy == TimestampPolicy::fail)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": non-increasing timestamp");
            warnings.push_back({path, lineno, "dropped measurement with non-increasing timestamp"});
            continue;
        }
        track.measurements.push_back(m);
    }
    if (!track.measurements.empty() && maybe_degrees)
        warnings.push_back({path, 0,
                            "coordinates look like lat/lon degrees; inputs must be projected meters"});
    return track;
}

inline LoadResult load_tracks(const std::string& directory,
                              TimestampPolicy policy = TimestampPolicy::drop_measurement) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory))
        throw std::runtime_error("not a directory: " + directory);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name.rfind("trip_", 0) == 0 && name.size() > 9 &&
            name.substr(name.size() - 4) == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    LoadResult result;
    for (const auto& f : files) {
        std::string name = f.filename().string();
        std::string id = name.substr(5, name.size() - 9);  // trip_<id>.txt
        Track t = parse_track_file(f.string(), id, result.warnings, policy);
        if (t.measurements.size() < 2) {
            result.warnings.push_back({f.string(), 0, "skipped: fewer than 2 valid measurements"});
            continue;
        }
        result.tracks.push_back(std::move(t));
    }
    return result;
}

inline void write_track(const Track& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write track file: " + path);
    for (const auto& m : t.measurements) {
        out << format_double(m.point.x) << ' ' << format_double(m.point.y) << ' '
            << format_double(m.t);
        if (m.heading) {
            out << ' ' << format_double(*m.heading);
            if (m.speed) out << ' ' << format_double(*m.speed);
        }
        out << '\n';
    }
}

inline void write_tracks(std::span<const Track> tracks, const std::string& directory) {
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    for (const auto& t : tracks)
        write_track(t, (fs::path(directory) / ("trip_" + t.id + ".txt")).string());
}

}  // namespace mapcons
