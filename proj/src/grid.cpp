#include "mkdv/grid.hpp"

#include <cmath>

namespace mkdv {

SpatialGrid SpatialGrid::line(double x_min, double dx, std::size_t n) {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidArgument("grid dx must be positive");
    if (n == 0) throw InvalidArgument("grid needs at least one node");
    return SpatialGrid{x_min, dx, n, false};
}

SpatialGrid SpatialGrid::periodic_centered(double length, std::size_t n) {
    if (!(length > 0.0)) throw InvalidArgument("periodic grid length must be positive");
    if (!is_power_of_two(n)) throw InvalidArgument("periodic grid size must be a power of two");
    const double dx = length / static_cast<double>(n);
    return SpatialGrid{-0.5 * length, dx, n, true};
}

std::vector<double> SpatialGrid::nodes() const {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

} // namespace mkdv
