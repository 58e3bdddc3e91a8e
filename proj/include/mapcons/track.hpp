#pragma once

// Vehicle tracks: time-ordered GPS measurements plus derived kinematics.
// Coordinates must already be projected meters; timestamps are seconds and
// only their monotonicity matters.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapcons/geom.hpp"

namespace mapcons {

struct Measurement {
    Point point;
    double t = 0.0;                       // seconds
    std::optional<double> heading;        // degrees, north = 0, clockwise, [0,360)
    std::optional<double> speed;          // km/h
};

struct Track {
    std::string id;
    std::vector<Measurement> measurements;

    std::vector<Point> points() const {
        std::vector<Point> out;
        out.reserve(measurements.size());
        for (const auto& m : measurements) out.push_back(m.point);
        return out;
    }
};

// Fills missing speed (segment length / dt, km/h) and heading (segment
// bearing) per measurement from the segment to its successor; the last
// measurement copies its predecessor's derived values. Idempotent: present
// values are never overwritten.
inline Track derive_kinematics(const Track& track) {
    if (track.measurements.size() < 2)
        throw std::invalid_argument("derive_kinematics: track needs >= 2 measurements");
    Track out = track;
    auto& ms = out.measurements;
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
        double dt = ms[i + 1].t - ms[i].t;
        double d = dist(ms[i].point, ms[i + 1].point);
        if (!ms[i].speed && dt > 0) ms[i].speed = d / dt * 3.6;
        if (!ms[i].heading && d > 0) ms[i].heading = bearing_deg(ms[i].point, ms[i + 1].point);
    }
    auto& last = ms.back();
    const auto& prev = ms[ms.size() - 2];
    if (!last.speed) last.speed = prev.speed;
    if (!last.heading) last.heading = prev.heading;
    return out;
}

struct DatasetStats {
    std::size_t track_count = 0;
    double mean_sampling_s = 0.0;  // averaged over all consecutive gaps
    double total_length_km = 0.0;
    double mean_speed_kmh = 0.0;   // weighted per consecutive segment
};

inline DatasetStats dataset_stats(std::span<const Track> tracks) {
    if (tracks.empty()) throw std::invalid_argument("dataset_stats: empty dataset");
    DatasetStats s;
    s.track_count = tracks.size();
    double gap_sum = 0, speed_sum = 0;
    std::size_t segments = 0;
    for (const auto& t : tracks) {
        const auto& ms = t.measurements;
        for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
            double dt = ms[i + 1].t - ms[i].t;
            double d = dist(ms[i].point, ms[i + 1].point);
            gap_sum += dt;
            s.total_length_km += d / 1000.0;
            if (dt > 0) speed_sum += d / dt * 3.6;
            ++segments;
        }
    }
    if (segments > 0) {
        s.mean_sampling_s = gap_sum / static_cast<double>(segments);
        s.mean_speed_kmh = speed_sum / static_cast<double>(segments);
    }
    return s;
}

}  // namespace mapcons
