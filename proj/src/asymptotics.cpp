#include "mkdv/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mkdv {

namespace {

using cplx = std::complex<double>;

// integrand of the chi term: divided difference of log(1 - |r|^2) against z0
struct ChiIntegrand {
    const ReflectionTable* table;
    double z0;
    double log_denom;  // log(1 - |r(z0)|^2)

    double operator()(double w) const {
        const double mod2 = std::norm(r_at(*table, w));
        return (std::log1p(-mod2) - log_denom) / (w - z0);
    }
};

// 4-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGl4X[4] = {-0.86113631159405258, -0.33998104358485626, 0.33998104358485626,
                             0.86113631159405258};
constexpr double kGl4W[4] = {0.34785484513745386, 0.65214515486254614, 0.65214515486254614,
                             0.34785484513745386};

double gauss_on_cells(const ChiIntegrand& f, double a, double b, double cell) {
    const auto n_cells = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((b - a) / cell - 1e-12)));
    const double h = (b - a) / static_cast<double>(n_cells);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) {
        const double lo = a + h * static_cast<double>(i);
        const double mid = lo + 0.5 * h;
        double cell_acc = 0.0;
        for (int k = 0; k < 4; ++k) cell_acc += kGl4W[k] * f(mid + 0.5 * h * kGl4X[k]);
        acc += 0.5 * h * cell_acc;
    }
    return acc;
}

double midpoint_rule(const ChiIntegrand& f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += f(a + h * (static_cast<double>(i) + 0.5));
    return acc * h;
}

} // namespace

double kappa_of(cplx r_z0) {
    const double mod2 = std::norm(r_z0);
    if (!(mod2 < 1.0)) throw InvalidArgument("kappa_of: need |r(z0)| < 1");
    return -std::log1p(-mod2) / (2.0 * M_PI);
}

double chi_integral_at_z0(const ReflectionTable& table, double z0) {
    if (!(z0 > 0.0) || !(z0 < table.z_max * (1.0 + 1e-12)))
        throw InvalidArgument("chi_integral_at_z0: need z0 in (0, z_max]");
    const double mod2 = std::norm(r_at(table, z0));
    if (!(mod2 < 1.0)) throw InvalidArgument("chi_integral_at_z0: |r(z0)| >= 1");

    const ChiIntegrand f{&table, z0, std::log1p(-mod2)};

    // Gauss panels aligned with the table cells (the interpolant is piecewise
    // cubic, so panel edges sit on its derivative kinks), then once refined.
    const double cell = std::min(table.dz, z0);
    const double gauss_a = gauss_on_cells(f, -z0, z0, cell);
    const double gauss_b = gauss_on_cells(f, -z0, z0, 0.5 * cell);

    // independent route: Richardson-extrapolated composite midpoint
    const std::size_t n_mid =
        std::max<std::size_t>(512, static_cast<std::size_t>(4.0 * z0 / cell));
    const double mid_1 = midpoint_rule(f, -z0, z0, n_mid);
    const double mid_2 = midpoint_rule(f, -z0, z0, 2 * n_mid);
    const double mid = (4.0 * mid_2 - mid_1) / 3.0;

    const double scale = std::max(1.0, std::abs(gauss_b));
    if (std::abs(gauss_b - gauss_a) > 1e-7 * scale || std::abs(gauss_b - mid) > 1e-6 * scale)
        throw QuadratureFailure("chi_integral_at_z0: refinement disagreement " +
                                std::to_string(std::abs(gauss_b - mid)) + " at z0 = " +
                                std::to_string(z0));
    return gauss_b / M_PI;
}

double phase_phi(const ReflectionTable& table, double z0) {
    const cplx r0 = r_at(table, z0);
    const double kappa = kappa_of(r0);
    if (!(kappa > 0.0))
        throw InvalidArgument("phase_phi: r(z0) = 0 has no phase (zero-amplitude case)");
    return arg_gamma_i_kappa(kappa) - 0.25 * M_PI - std::arg(r0) + chi_integral_at_z0(table, z0);
}

double region1_phase(const PhaseGeometry& g, const ReflectionTable& table) {
    if (!(g.x < 0.0)) throw InvalidArgument("region1_phase: requires x < 0");
    const double z0 = g.z0.real();
    const double kappa = kappa_of(r_at(table, z0));
    const double log192 = std::log(192.0 * g.t * z0 * z0 * z0);
    return 16.0 * g.t * z0 * z0 * z0 - kappa * log192 + phase_phi(table, z0) - 0.5 * M_PI;
}

double region1_leading(const PhaseGeometry& g, const ReflectionTable& table) {
    if (!(g.x < 0.0)) throw InvalidArgument("region1_leading: requires x < 0");
    const double z0 = g.z0.real();
    const double kappa = kappa_of(r_at(table, z0));
    if (kappa == 0.0) return 0.0;
    const double amplitude = std::sqrt(kappa / (3.0 * g.t * z0));
    return amplitude * std::cos(region1_phase(g, table));
}

double region234_leading(const PhaseGeometry& g, const PainleveSolution& sol) {
    const double scale = std::cbrt(3.0 * g.t);
    return painleve_eval(sol, g.x / scale) / scale;
}

double calibrate_rho(const ReflectionTable& table,
                     std::span<const std::pair<double, double>> u_origin_series,
                     double painleve_s_min, CalibrationReport* report) {
    if (u_origin_series.size() < 3)
        throw InvalidArgument("calibrate_rho: need at least 3 reference samples");
    const cplx r0c = table.r0();
    if (!(std::abs(r0c) < 1.0)) throw InvalidArgument("calibrate_rho: |r(0)| >= 1");
    const double r0 = r0c.real();

    CalibrationReport rep;
    if (std::abs(r0) < 1e-12) {
        rep.chosen = 0.0;
        if (report) *report = rep;
        return 0.0;
    }

    const auto residual_for = [&](double rho) {
        const PainleveSolution sol = painleve2_solve(rho, painleve_s_min, 8.0, 1e-3);
        const double p0 = painleve_eval(sol, 0.0);
        double acc = 0.0;
        for (const auto& [t, u_num] : u_origin_series) {
            acc += std::abs(u_num - p0 / std::cbrt(3.0 * t));
        }
        return acc;
    };

    rep.residual_plus = residual_for(r0);
    rep.residual_minus = residual_for(-r0);
    const double best = std::min(rep.residual_plus, rep.residual_minus);
    const double worst = std::max(rep.residual_plus, rep.residual_minus);
    rep.ratio = (best > 0.0) ? worst / best : std::numeric_limits<double>::infinity();
    rep.chosen = (rep.residual_plus <= rep.residual_minus) ? r0 : -r0;
    if (report) *report = rep;
    if (rep.ratio < 2.0)
        throw AmbiguousCalibration("calibrate_rho: residual ratio " + std::to_string(rep.ratio) +
                                   " < 2; reference data does not separate the branches");
    return rep.chosen;
}

double error_envelope(const PhaseGeometry& g, Region label, const EnvelopeParams& params) {
    if (!(params.p > 4.0)) throw InvalidArgument("error_envelope: need p > 4");
    const double p = params.p;
    const double q = p / (p - 1.0);
    const double t = g.t;
    const double tau = g.tau;
    const double z0 = std::abs(g.z0);

    switch (label) {
        case Region::I:
            return std::pow(z0 * t, -0.5) * std::pow(tau, -0.5) + std::pow(z0 * t, -0.75);
        case Region::II:
            return std::pow(tau, -1.0 / (2.0 * q)) * std::pow(tau / t, 0.5 - 2.0 / (3.0 * p));
        case Region::III:
            return std::pow(t, 2.0 / (3.0 * p) - 0.5);
        case Region::IV:
            return std::pow(t, -0.5) + std::exp(-16.0 * std::pow(tau, 2.0 / 3.0) * params.eta) *
                                           std::pow(t, 2.0 / (3.0 * p) - 0.5);
        case Region::V:
            return std::exp(-params.c * tau) * std::pow(t, -1.0 / 3.0) + std::pow(g.x, -1.5) +
                   std::exp(-params.c * tau) * std::pow(t, -2.0 / 3.0);
    }
    throw InvalidArgument("error_envelope: unknown region");
}

} // namespace mkdv
