#pragma once

#include <cmath>
#include <random>

namespace tfus {

// mt19937_64 output is pinned by the standard; the distributions are not, so
// draws that must be byte-reproducible across toolchains go through these.

inline double runif(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

inline double runif(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * runif(rng);
}

inline long rint(std::mt19937_64& rng, long lo, long hi) { // inclusive bounds
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// Box-Muller; consumes two uniforms per call.
inline double rnorm(std::mt19937_64& rng) {
    double u1 = runif(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = runif(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace tfus
