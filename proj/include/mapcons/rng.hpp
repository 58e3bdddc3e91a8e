#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "mapcons/util.hpp"

namespace mapcons {

using Rng = std::mt19937_64;

// Uniform in [0,1). Explicit so that outputs depend only on the engine,
// not on standard-library distribution internals.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// size must be > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t size) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(size)) % size;
}

// Box-Muller; consumes two draws per call.
inline double normal(Rng& rng, double mean = 0.0, double sigma = 1.0) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sigma * z;
}

// Stable per-task seed: adding tasks never perturbs other tasks' streams.
inline std::uint64_t task_seed(std::uint64_t master, std::string_view task) {
    return master ^ fnv1a64(task);
}

}  // namespace mapcons
