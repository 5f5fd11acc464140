#pragma once

// Shared helpers for the test suites: analytic initial profiles sampled onto
// grids, a naive DFT used as the transform oracle, and small utilities.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/scattering.hpp"

namespace mkdv::test {

inline double sech(double x) { return 1.0 / std::cosh(x); }

/// amplitude * sech(x / width) sampled on [-half_width, half_width]
inline Potential sech_potential(double amplitude, double width, double half_width, double dx) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
    SpatialGrid g = SpatialGrid::line(-half_width, dx, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = amplitude * sech(g.x(i) / width);
    return Potential::make(g, std::move(v));
}

/// amplitude * exp(-(x / width)^2) sampled on [-half_width, half_width]
inline Potential gaussian_potential(double amplitude, double width, double half_width, double dx) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
    SpatialGrid g = SpatialGrid::line(-half_width, dx, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = g.x(i) / width;
        v[i] = amplitude * std::exp(-s * s);
    }
    return Potential::make(g, std::move(v));
}

/// O(n^2) reference DFT with the same sign convention as Fft::forward.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * static_cast<double>(j * k % n) / static_cast<double>(n);
            acc += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace mkdv::test
