#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mkdv/errors.hpp"

namespace mkdv {

/// log Gamma(i*kappa) for kappa > 0, continuous in kappa (no branch jumps).
std::complex<double> log_gamma_imag_axis(double kappa);

/// Continuous branch of arg Gamma(i*kappa) for kappa > 0 (the imaginary part
/// of log Gamma along the positive imaginary axis, tending to -pi/2 at 0+).
double arg_gamma_i_kappa(double kappa);

/// Airy function Ai and its derivative, absolute accuracy ~1e-13 on the
/// working range.
double airy_ai(double s);
double airy_ai_prime(double s);

/// Tabulated Ablowitz-Segur solution of P'' = s P + 2 P^3 with boundary
/// behaviour P(s) ~ rho * Ai(s) as s -> +infinity.
struct PainleveSolution {
    double rho = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
    double ds = 0.0;
    std::vector<double> s_grid;   // ascending
    std::vector<double> p;
    std::vector<double> p_prime;

    std::size_t size() const { return s_grid.size(); }
};

struct PainleveOptions {
    double blowup_guard = 8.0;   // |P| beyond this aborts (rho too close to 1)
    double rtol = 1e-12;
    double atol = 1e-14;
    double min_step = 1e-9;
};

PainleveSolution painleve2_solve(double rho, double s_min = -12.0, double s_max = 8.0,
                                 double ds = 1e-3, const PainleveOptions& opts = {});

/// Cubic interpolation of P; exact at nodes, OutOfRange outside the window.
double painleve_eval(const PainleveSolution& sol, double s);

/// Max |P'' - sP - 2P^3| over interior nodes in [s_lo, s_hi], with P''
/// estimated by a five-point second difference of the stored values.
double painleve_residual_max(const PainleveSolution& sol, double s_lo, double s_hi);

void write_csv(const PainleveSolution& sol, std::ostream& os);

} // namespace mkdv
