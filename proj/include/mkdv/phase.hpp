#pragma once

#include <complex>
#include <string>

#include "mkdv/errors.hpp"

namespace mkdv {

enum class Region { I, II, III, IV, V };

std::string to_string(Region r);

/// Phase geometry of theta(z; x, t) = 4 t z^3 + x z at a space-time point.
/// z0 is the stationary point of theta (real for x < 0, imaginary for x > 0)
/// and tau = |z0|^3 t is the scale-invariant region parameter.
struct PhaseGeometry {
    double x = 0.0;
    double t = 0.0;
    std::complex<double> z0;
    double tau = 0.0;
};

PhaseGeometry make_geometry(double x, double t);

std::complex<double> phase_theta(const PhaseGeometry& g, std::complex<double> z);

/// Region-classification thresholds. The asymptotic regions overlap in the
/// source analysis; these cut-offs make the classifier a partition.
struct RegionThresholds {
    double m_prime = 1.0;          // Region III half-width in tau
    double tau_i = 10.0;           // minimum tau for Region I (x < 0)
    double tau_v = 10.0;           // minimum tau for Region V (x > 0)
    double growth_exponent = 0.4;  // Region II guard: tau <= t^growth_exponent

    void validate() const;
};

Region classify_region(const PhaseGeometry& g, const RegionThresholds& th);

} // namespace mkdv
