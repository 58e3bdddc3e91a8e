#pragma once

#include <stdexcept>
#include <string>

namespace mapcons {

enum class Algorithm {
    incremental,  // incremental Fréchet track insertion
    cao,          // clarification + local incremental insertion
    kde,          // density grid, threshold, thinning
    kmeans,       // seeded k-means point clustering
    tracebundle,  // turn clustering + trajectory bundling
};

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::incremental: return "incremental";
        case Algorithm::cao: return "cao";
        case Algorithm::kde: return "kde";
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::tracebundle: return "tracebundle";
    }
    return "?";
}

inline Algorithm algorithm_from_name(const std::string& s) {
    if (s == "incremental") return Algorithm::incremental;
    if (s == "cao") return Algorithm::cao;
    if (s == "kde") return Algorithm::kde;
    if (s == "kmeans") return Algorithm::kmeans;
    if (s == "tracebundle") return Algorithm::tracebundle;
    throw std::invalid_argument("unknown algorithm: " + s);
}

// Knobs for all constructors, defaulted to the published per-algorithm
// values; epsilon is dataset-dependent (180/90/170/80 m in the source
// experiments), defaulted here to the smallest.
struct ConstructParams {
    Algorithm algorithm = Algorithm::incremental;

    // incremental Fréchet
    double epsilon_m = 80.0;

    // clarification (cao)
    double clarify_radius_m = 30.0;
    int clarify_iterations = 5;
    double clarify_damping = 0.5;

    // local incremental (cao) and kmeans heading gate
    double proximity_m = 20.0;
    double bearing_deg = 45.0;

    // kde
    double cell_m = 16.0;
    double blur_sigma_cells = 1.0;
    double threshold = 5.0;
    bool multi_threshold = false;

    // kmeans
    double seed_spacing_m = 50.0;
    double merge_proximity_m = 50.0;

    // tracebundle
    double turn_angle_deg = 15.0;
    double speed_max_kmh = 40.0;
    double cluster_proximity_m = 25.0;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be > 0");
        };
        positive(epsilon_m, "epsilon");
        positive(clarify_radius_m, "clarify-radius");
        if (clarify_iterations < 1) throw std::invalid_argument("clarify-iterations must be >= 1");
        if (!(clarify_damping > 0 && clarify_damping < 1))
            throw std::invalid_argument("clarify-damping must be in (0,1)");
        positive(proximity_m, "proximity");
        positive(cell_m, "cell");
        positive(blur_sigma_cells, "blur");
        positive(threshold, "threshold");
        positive(seed_spacing_m, "seed-spacing");
        positive(merge_proximity_m, "merge-proximity");
        positive(speed_max_kmh, "speed-max");
        positive(cluster_proximity_m, "proximity");
        for (double a : {bearing_deg, turn_angle_deg})
            if (!(a > 0 && a < 180)) throw std::invalid_argument("angles must be in (0,180)");
    }
};

}  // namespace mapcons
