#include "mkdv/phase.hpp"

#include <cmath>

namespace mkdv {

std::string to_string(Region r) {
    switch (r) {
        case Region::I: return "I";
        case Region::II: return "II";
        case Region::III: return "III";
        case Region::IV: return "IV";
        case Region::V: return "V";
    }
    return "?";
}

PhaseGeometry make_geometry(double x, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("make_geometry: t must be positive");
    if (!std::isfinite(x)) throw InvalidArgument("make_geometry: x must be finite");
    PhaseGeometry g;
    g.x = x;
    g.t = t;
    if (x < 0.0) {
        const double z0 = std::sqrt(-x / (12.0 * t));
        g.z0 = {z0, 0.0};
        g.tau = z0 * z0 * z0 * t;
    } else if (x > 0.0) {
        const double m = std::sqrt(x / (12.0 * t));
        g.z0 = {0.0, m};
        g.tau = m * m * m * t;
    } else {
        g.z0 = {0.0, 0.0};
        g.tau = 0.0;
    }
    return g;
}

std::complex<double> phase_theta(const PhaseGeometry& g, std::complex<double> z) {
    return 4.0 * g.t * z * z * z + g.x * z;
}

void RegionThresholds::validate() const {
    if (!(m_prime > 0.0)) throw InvalidArgument("thresholds: m_prime must be positive");
    if (!(tau_i > m_prime)) throw InvalidArgument("thresholds: tau_i must exceed m_prime");
    if (!(tau_v > 1.0 / m_prime)) throw InvalidArgument("thresholds: tau_v must exceed 1/m_prime");
    if (!(growth_exponent > 0.0 && growth_exponent <= 0.4))
        throw InvalidArgument("thresholds: growth_exponent must lie in (0, 2/5]");
}

Region classify_region(const PhaseGeometry& g, const RegionThresholds& th) {
    th.validate();
    if (g.tau <= th.m_prime) return Region::III;
    if (g.x < 0.0) {
        if (g.tau >= th.tau_i) return Region::I;
        // Region II additionally requires sub-t^{2/5} growth of tau; points
        // failing the guard fall back to Region I.
        if (g.tau <= std::pow(g.t, th.growth_exponent)) return Region::II;
        return Region::I;
    }
    if (g.tau <= th.tau_v) return Region::IV;
    return Region::V;
}

} // namespace mkdv
