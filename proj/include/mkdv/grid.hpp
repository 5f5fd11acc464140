#pragma once

#include <cstddef>
#include <vector>

#include "mkdv/errors.hpp"

namespace mkdv {

/// Uniform spatial grid. Periodic grids cover [x_min, x_min + n*dx) and must
/// have power-of-two n so spectral transforms apply directly.
struct SpatialGrid {
    double x_min = 0.0;
    double dx = 0.0;
    std::size_t n = 0;
    bool periodic = false;

    static SpatialGrid line(double x_min, double dx, std::size_t n);
    static SpatialGrid periodic_centered(double length, std::size_t n);

    double x(std::size_t i) const { return x_min + dx * static_cast<double>(i); }
    double length() const { return dx * static_cast<double>(n); }

    std::vector<double> nodes() const;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace mkdv
