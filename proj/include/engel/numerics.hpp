#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "engel/types.hpp"

namespace engel {

// Centered finite-difference tangents on the parameter grid; periodic wrap
// for closed curves, second-order one-sided stencils at open ends.
std::vector<Vec4> curve_tangents(const DiscreteCurve& c);

// Same stencils for a scalar sequence on the curve's parameter grid.
std::vector<double> scalar_derivative(const std::vector<double>& f,
                                      const std::vector<double>& params, bool closed);

// Cumulative trapezoidal integral of f dg starting at index j0 with seed v0.
// For closed sequences the accumulation wraps past the seam; entry j0 is v0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& f,
                                         const std::vector<double>& g,
                                         std::size_t j0, double v0, bool closed);

// Full-loop trapezoidal integral of f dg around a closed sequence.
double loop_trapezoid(const std::vector<double>& f, const std::vector<double>& g);

// C-infinity step: 0 for u <= 0, 1 for u >= 1, flat to all orders at both ends.
inline double smoothstep_inf(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

// C-infinity bump supported on (-1, 1) with value 1 at 0.
inline double bump_inf(double u) {
    const double s = 1.0 - u * u;
    if (s <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / s);
}

// Deterministic, platform-independent uniform doubles in [0,1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace engel
