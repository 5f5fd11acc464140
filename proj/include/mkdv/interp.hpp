#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "mkdv/errors.hpp"

namespace mkdv {

/// Piecewise cubic Lagrange interpolation on a uniform grid x0 + k*dx.
/// Uses the 4-point stencil centred on the target cell, clamped at the
/// ends; exact at nodes, O(dx^4) between them.
template <typename T>
T cubic_interp_uniform(double x0, double dx, std::span<const T> v, double x) {
    const std::size_t n = v.size();
    if (n == 0) throw InvalidArgument("cubic_interp_uniform: empty table");
    if (n == 1) return v[0];

    const double u = (x - x0) / dx;
    // cell index of the interval [k, k+1] containing u
    double fl = std::floor(u);
    std::ptrdiff_t cell = static_cast<std::ptrdiff_t>(fl);
    if (cell < 0) cell = 0;
    if (cell > static_cast<std::ptrdiff_t>(n) - 2) cell = static_cast<std::ptrdiff_t>(n) - 2;

    if (n < 4) {
        // fall back to linear on tiny tables
        const double s = u - static_cast<double>(cell);
        return v[cell] * (1.0 - s) + v[cell + 1] * s;
    }

    std::ptrdiff_t i0 = cell - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > static_cast<std::ptrdiff_t>(n) - 4) i0 = static_cast<std::ptrdiff_t>(n) - 4;

    const double s = u - static_cast<double>(i0);  // in [~0, ~3]
    // Lagrange weights for nodes at offsets 0,1,2,3
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return v[i0] * w0 + v[i0 + 1] * w1 + v[i0 + 2] * w2 + v[i0 + 3] * w3;
}

/// Value at x0 + (k + 1/2)*dx from the cubic through nodes k-1..k+2 with the
/// stencil clamped to [lo, hi]. Exact for cubics; keeps plateau regions flat.
template <typename T>
T cubic_midpoint(std::span<const T> v, std::size_t lo, std::size_t hi, std::size_t k) {
    // midpoint of cell [k, k+1], with lo <= k < hi <= v.size()-1
    if (hi - lo < 3) {
        return (v[k] + v[k + 1]) * 0.5;
    }
    std::size_t i0;
    if (k == lo) i0 = lo;
    else if (k + 2 > hi) i0 = hi - 3;
    else i0 = k - 1;
    const double s = static_cast<double>(k - i0) + 0.5;
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return v[i0] * w0 + v[i0 + 1] * w1 + v[i0 + 2] * w2 + v[i0 + 3] * w3;
}

} // namespace mkdv
