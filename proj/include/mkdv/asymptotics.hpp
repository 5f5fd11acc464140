#pragma once

#include <complex>
#include <span>
#include <utility>

#include "mkdv/phase.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/special.hpp"

namespace mkdv {

/// kappa = -(1/2pi) log(1 - |r(z0)|^2); rejects |r| >= 1.
double kappa_of(std::complex<double> r_z0);

/// (1/pi) * int_{-z0}^{z0} log((1-|r(w)|^2)/(1-|r(z0)|^2)) / (w - z0) dw.
/// Evaluated by two independent quadratures (cell-aligned Gauss and
/// Richardson midpoint); QuadratureFailure when they disagree.
double chi_integral_at_z0(const ReflectionTable& table, double z0);

/// Phase shift arg Gamma(i kappa) - pi/4 - arg r(z0) + chi term, with r the
/// stored (real-normalised) reflection coefficient.
double phase_phi(const ReflectionTable& table, double z0);

/// Full argument of the oscillatory leading term at (x, t), x < 0:
/// 16 t z0^3 - kappa log(192 t z0^3) + phi(z0) - pi/2. The -pi/2 accounts for
/// the factor i between the stored real-normalised r and the AKNS
/// transition-matrix ratio entering the source formula.
double region1_phase(const PhaseGeometry& g, const ReflectionTable& table);

/// sqrt(kappa / (3 t z0)) * cos(region1_phase); zero amplitude when r(z0)=0.
double region1_leading(const PhaseGeometry& g, const ReflectionTable& table);

/// (3t)^{-1/3} P(x / (3t)^{1/3}); OutOfRange outside the tabulated s-window.
double region234_leading(const PhaseGeometry& g, const PainleveSolution& sol);

struct CalibrationReport {
    double residual_plus = 0.0;   // candidate rho = +r(0)
    double residual_minus = 0.0;  // candidate rho = -r(0)
    double ratio = 1.0;           // worse / better
    double chosen = 0.0;
};

/// Selects rho in {+r(0), -r(0)} against reference values of u(0, t);
/// Ambiguous when the candidates' residuals differ by less than 2x.
double calibrate_rho(const ReflectionTable& table,
                     std::span<const std::pair<double, double>> u_origin_series,
                     double painleve_s_min = -12.0,
                     CalibrationReport* report = nullptr);

struct EnvelopeParams {
    double p = 8.0;    // Hoelder exponent, p > 4
    double eta = 0.1;  // Region IV exponential rate factor
    double c = 1.0;    // Region V exponential rate
};

/// Error-envelope magnitude for the region, unit constants.
double error_envelope(const PhaseGeometry& g, Region label, const EnvelopeParams& params = {});

} // namespace mkdv
