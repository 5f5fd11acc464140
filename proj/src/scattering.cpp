#include "mkdv/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mkdv/errors.hpp"
#include "mkdv/interp.hpp"
#include "mkdv/parallel.hpp"

namespace mkdv {

namespace {

using cplx = std::complex<double>;

struct Mat2 {
    cplx m11, m12, m21, m22;
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
}

inline Mat2 scaled(const Mat2& a, double s) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
}

// B(x) * M with B = [[0, w],[conj(w), 0]], w = u * e^{2izx}
inline Mat2 envelope_mul(cplx w, const Mat2& m) {
    const cplx wc = std::conj(w);
    return {w * m.m21, w * m.m22, wc * m.m11, wc * m.m12};
}

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

// cubic in-cell value of the samples at fraction frac of cell [k, k+1],
// stencil clamped to the support window [lo, hi]
double cell_value(std::span<const double> v, std::size_t lo, std::size_t hi, std::size_t k,
                  double frac) {
    if (hi - lo < 3) return v[k] * (1.0 - frac) + v[k + 1] * frac;
    std::size_t i0;
    if (k <= lo) i0 = lo;
    else if (k + 2 > hi) i0 = hi - 3;
    else i0 = k - 1;
    const double s = static_cast<double>(k - i0) + frac;
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return v[i0] * w0 + v[i0 + 1] * w1 + v[i0 + 2] * w2 + v[i0 + 3] * w3;
}

inline cplx phase_at(double z, double x) {
    return {std::cos(2.0 * z * x), std::sin(2.0 * z * x)};
}

// one RK4 step of Phi' = B(x) Phi over [x, x+h], stage data prepared by caller
inline void rk4_step(Mat2& phi, double h, cplx w0, cplx wm, cplx w1) {
    const Mat2 k1 = envelope_mul(w0, phi);
    const Mat2 k2 = envelope_mul(wm, phi + scaled(k1, 0.5 * h));
    const Mat2 k3 = envelope_mul(wm, phi + scaled(k2, 0.5 * h));
    const Mat2 k4 = envelope_mul(w1, phi + scaled(k3, h));
    phi = phi + scaled(k1 + scaled(k2 + k3, 2.0) + k4, h / 6.0);
}

// exact exponential of the midpoint-frozen envelope over one step
inline void magnus_step(Mat2& phi, double h, double um, cplx pm) {
    const double ch = std::cosh(h * um);
    const double sh = std::sinh(h * um);
    const Mat2 s{cplx{ch, 0.0}, pm * sh, std::conj(pm) * sh, cplx{ch, 0.0}};
    phi = matmul(s, phi);
}

struct SweepResult {
    cplx a, b;
};

// integrates across cells [lo, hi) with substeps per cell (1 = h, 2 = h/2)
SweepResult integrate_envelope(const Potential& u0, double z, std::size_t lo, std::size_t hi,
                               int substeps, JostScheme scheme) {
    const double dx = u0.grid.dx;
    const double h = dx / static_cast<double>(substeps);
    std::span<const double> v(u0.values);

    Mat2 phi{cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}};

    const cplx shift_half = phase_at(z, 0.5 * h);  // advances e^{2izx} by h/2
    const cplx shift_full = shift_half * shift_half;

    cplx p = phase_at(z, u0.grid.x(lo));
    std::size_t since_refresh = 0;

    for (std::size_t k = lo; k < hi; ++k) {
        if (since_refresh >= 128) {
            p = phase_at(z, u0.grid.x(k));
            since_refresh = 0;
        }
        ++since_refresh;

        for (int s = 0; s < substeps; ++s) {
            const double f0 = static_cast<double>(s) / substeps;
            const double fm = (static_cast<double>(s) + 0.5) / substeps;
            const double f1 = (static_cast<double>(s) + 1.0) / substeps;

            const double um = cell_value(v, lo, hi, k, fm);
            const cplx pm = p * shift_half;
            const cplx p1 = p * shift_full;

            if (scheme == JostScheme::MagnusMidpoint) {
                magnus_step(phi, h, um, pm);
            } else {
                const double u_begin = (s == 0) ? v[k] : cell_value(v, lo, hi, k, f0);
                const double u_end = (s == substeps - 1) ? v[k + 1] : cell_value(v, lo, hi, k, f1);
                rk4_step(phi, h, u_begin * p, um * pm, u_end * p1);
            }
            p = p1;
        }
    }

    // T = Phi(x_R)^{-1}; with det Phi = 1 the needed entries are
    // a = Phi_22 and b = -Phi_12.
    return {phi.m22, -phi.m12};
}

} // namespace

Potential Potential::make(SpatialGrid grid, std::vector<double> values, double tail_epsilon) {
    if (values.size() != grid.n) throw InvalidArgument("potential: sample count must match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("potential: samples must be finite");
    Potential p{std::move(grid), std::move(values), tail_epsilon};
    if (!(p.tail_epsilon > 0.0)) p.tail_epsilon = 1e-12 * p.max_abs();
    return p;
}

double Potential::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::optional<std::pair<std::size_t, std::size_t>> Potential::effective_support() const {
    std::size_t first = values.size(), last = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::abs(values[i]) >= tail_epsilon) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == values.size()) return std::nullopt;
    return std::make_pair(first, last);
}

TransitionMatrix jost_solve(const Potential& u0, double z, const JostOptions& opts) {
    if (!std::isfinite(z)) throw InvalidArgument("jost_solve: z must be finite");

    const auto support = u0.effective_support();
    TransitionMatrix out;
    out.z = z;
    if (!support || support->second <= support->first) {
        return out;  // free system
    }
    const std::size_t lo = support->first;
    const std::size_t hi = support->second;

    const SweepResult coarse = integrate_envelope(u0, z, lo, hi, 1, opts.scheme);
    SweepResult result = coarse;
    if (opts.refine) {
        const SweepResult fine = integrate_envelope(u0, z, lo, hi, 2, opts.scheme);
        out.refine_delta = std::max(std::abs(fine.a - coarse.a), std::abs(fine.b - coarse.b));
        result = fine;
        if (out.refine_delta > opts.tolerance) {
            throw NonConvergence("jost_solve: step halving changed (a,b) by " +
                                 std::to_string(out.refine_delta) + " at z = " + std::to_string(z));
        }
    }
    out.a = result.a;
    out.b = result.b;
    out.unitarity_residual = std::abs(std::norm(out.a) - std::norm(out.b) - 1.0);
    return out;
}

ReflectionTable reflection_coefficient(const Potential& u0, double z_max, double dz, int threads,
                                       const JostOptions& opts) {
    if (!(z_max > 0.0) || !(dz > 0.0)) throw InvalidArgument("reflection grid needs z_max, dz > 0");
    const auto k_half = static_cast<long long>(std::llround(z_max / dz));
    if (std::abs(static_cast<double>(k_half) * dz - z_max) > 1e-9 * z_max)
        throw InvalidArgument("reflection grid: z_max must be an integer multiple of dz");

    const std::size_t n = static_cast<std::size_t>(2 * k_half + 1);
    ReflectionTable table;
    table.z_max = z_max;
    table.dz = dz;
    table.z_grid.resize(n);
    table.r_values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        table.z_grid[i] = dz * static_cast<double>(static_cast<long long>(i) - k_half);

    std::vector<double> residuals(n, 0.0);
    std::vector<std::string> failures(n);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            const TransitionMatrix t = jost_solve(u0, table.z_grid[i], opts);
            table.r_values[i] = t.reflection();
            residuals[i] = t.unitarity_residual;
        } catch (const Error& e) {
            failures[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i].empty())
            throw NonConvergence("reflection_coefficient: node failure: " + failures[i]);
        if (!(std::abs(table.r_values[i]) < 1.0))
            throw NonConvergence("reflection_coefficient: |r| >= 1 at z = " +
                                 std::to_string(table.z_grid[i]));
    }
    table.max_unitarity_residual = *std::max_element(residuals.begin(), residuals.end());
    return table;
}

ReflectionTable make_reflection_table(double z_max, double dz, std::vector<cplx> r_values) {
    if (!(z_max > 0.0) || !(dz > 0.0)) throw InvalidArgument("reflection grid needs z_max, dz > 0");
    const auto k_half = static_cast<long long>(std::llround(z_max / dz));
    if (r_values.size() != static_cast<std::size_t>(2 * k_half + 1))
        throw InvalidArgument("make_reflection_table: sample count does not match grid");
    ReflectionTable table;
    table.z_max = z_max;
    table.dz = dz;
    table.z_grid.resize(r_values.size());
    for (std::size_t i = 0; i < r_values.size(); ++i)
        table.z_grid[i] = dz * static_cast<double>(static_cast<long long>(i) - k_half);
    table.r_values = std::move(r_values);
    return table;
}

cplx r_at(const ReflectionTable& table, double z) {
    if (table.size() == 0) throw InvalidArgument("r_at: empty table");
    if (std::abs(z) > table.z_max * (1.0 + 1e-12))
        throw OutOfRange("r_at: |z| = " + std::to_string(std::abs(z)) + " exceeds z_max = " +
                         std::to_string(table.z_max));
    const double u = (z - table.z_grid.front()) / table.dz;
    const double k = std::round(u);
    if (std::abs(u - k) < 1e-9 && k >= 0.0 && k < static_cast<double>(table.size()))
        return table.r_values[static_cast<std::size_t>(k)];
    return cubic_interp_uniform<cplx>(table.z_grid.front(), table.dz,
                                      std::span<const cplx>(table.r_values), z);
}

} // namespace mkdv
