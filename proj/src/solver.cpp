#include "mkdv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "json.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/fft.hpp"
#include "mkdv/io.hpp"

namespace mkdv {

namespace {

using cplx = std::complex<double>;

// Taylor coefficients (about z = 0) of the ETDRK4 weight functions divided
// by the step: q = (e^{z/2}-1)/z, f1..f3 the Cox-Matthews combinations.
constexpr double kQSeries[] = {
    0.5, 0.125, 0.020833333333333333333, 0.0026041666666666666667, 0.00026041666666666666667,
    0.000021701388888888888889, 1.5500992063492063492e-6, 9.6881200396825396825e-8,
    5.3822889109347442681e-9, 2.6911444554673721340e-10, 1.2232474797578964246e-11,
    5.0968644989912351023e-13, 1.9603324996120135009e-14, 7.0011874986143339318e-16,
    2.3337291662047779773e-17, 7.2929036443899311790e-19, 2.1449716601146856409e-20,
    5.9582546114296823357e-22, 1.5679617398499164041e-23, 3.9199043496247910104e-25,
    9.3331055943447405009e-27};
constexpr double kF1Series[] = {
    0.16666666666666666667, 0.16666666666666666667, 0.075, 0.022222222222222222222,
    0.0049603174603174603175, 0.00089285714285714285714, 0.0001350308641975308642,
    0.000017636684303350970018, 2.0292207792207792208e-6, 2.0876756987868098979e-7,
    1.9431443042554153665e-8, 1.6517873660730803588e-9, 1.2923706706775489844e-10,
    9.3677755714792751830e-12, 6.3257788222774217172e-13, 3.9985169839580739743e-14,
    2.3757635862744312882e-15, 1.3317429099531414141e-16, 7.0658317238842453043e-18,
    3.5587165569802293147e-19, 1.7058630452481316606e-20};
constexpr double kF2Series[] = {
    0.33333333333333333333, 0.16666666666666666667, 0.05, 0.011111111111111111111,
    0.0019841269841269841270, 0.00029761904761904761905, 0.000038580246913580246914,
    4.4091710758377425044e-6, 4.5093795093795093795e-7, 4.1753513975736197958e-8,
    3.5329896441007552119e-9, 2.7529789434551339313e-10, 1.9882625702731522837e-11,
    1.3382536530684678833e-12, 8.4343717630365622896e-14, 4.9981462299475924679e-15,
    2.7950159838522721038e-16, 1.4797143443923793491e-17, 7.4377176040886792677e-19,
    3.5587165569802293147e-20, 1.6246314716648872958e-21};
constexpr double kF3Series[] = {
    0.16666666666666666667, 0.0, -0.0083333333333333333333, -0.0027777777777777777778,
    -0.00059523809523809523810, -0.000099206349206349206349, -0.000013778659611992945326,
    -1.6534391534391534392e-6, -1.7536475869809203143e-7, -1.6701405590294479183e-8,
    -1.4453139453139453139e-9, -1.1470745597729724714e-10, -8.4118801050017981235e-12,
    -5.7353727988648623569e-13, -3.6548944306491769922e-14, -2.1866889756020717047e-15,
    -1.2330952869936494575e-16, -6.5765081972994637736e-18, -3.3273999807765144092e-19,
    -1.6014224506411031916e-20, -7.3495233241982996717e-22};

cplx eval_series(std::span<const double> c, cplx z) {
    cplx acc{c.back(), 0.0};
    for (std::size_t i = c.size() - 1; i-- > 0;) acc = acc * z + c[i];
    return acc;
}

// ETDRK4 per-mode weights; z = dt * L is purely imaginary here, so the only
// cancellation risk sits at small |z| where the series takes over.
struct Etdrk4Weights {
    std::vector<cplx> e_full, e_half, q, f1, f2, f3;

    Etdrk4Weights(std::span<const cplx> lin, double dt) {
        const std::size_t n = lin.size();
        e_full.resize(n);
        e_half.resize(n);
        q.resize(n);
        f1.resize(n);
        f2.resize(n);
        f3.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z = dt * lin[j];
            e_full[j] = std::exp(z);
            e_half[j] = std::exp(0.5 * z);
            if (std::abs(z) < 0.5) {
                q[j] = dt * eval_series(kQSeries, z);
                f1[j] = dt * eval_series(kF1Series, z);
                f2[j] = dt * eval_series(kF2Series, z);
                f3[j] = dt * eval_series(kF3Series, z);
            } else {
                const cplx z3 = z * z * z;
                const cplx ez = e_full[j];
                q[j] = dt * (e_half[j] - 1.0) / z;
                f1[j] = dt * (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
                f2[j] = dt * 2.0 * (2.0 + z + ez * (-2.0 + z)) / z3;
                f3[j] = dt * (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
            }
        }
    }
};

struct SpectralWorkspace {
    const SpatialGrid* grid;
    Fft fft;
    int threads;
    std::vector<cplx> lin;    // i xi^3 per mode
    std::vector<cplx> dmult;  // 2 i xi, dealias-masked
    std::vector<char> keep;   // dealias mask
    std::vector<cplx> phys, spec_tmp;

    SpectralWorkspace(const SpatialGrid& g, double dealias_fraction, int nthreads)
        : grid(&g), fft(g.n), threads(nthreads) {
        const std::size_t n = g.n;
        lin.resize(n);
        dmult.resize(n);
        keep.assign(n, 1);
        phys.resize(n);
        spec_tmp.resize(n);
        const double dk = 2.0 * M_PI / g.length();
        const auto cutoff = static_cast<long long>(
            std::floor(dealias_fraction * static_cast<double>(n / 2)));
        for (std::size_t j = 0; j < n; ++j) {
            const long long m = (j <= n / 2) ? static_cast<long long>(j)
                                             : static_cast<long long>(j) - static_cast<long long>(n);
            const double xi = dk * static_cast<double>(m);
            lin[j] = cplx{0.0, xi * xi * xi};
            keep[j] = (std::llabs(m) <= cutoff) ? 1 : 0;
            dmult[j] = keep[j] ? cplx{0.0, 2.0 * xi} : cplx{0.0, 0.0};
        }
    }

    // N(u) = 2 (u^3)_x evaluated pseudo-spectrally with the 2/3-rule mask
    void nonlinear(std::span<const cplx> u_hat, std::span<cplx> out) {
        const std::size_t n = u_hat.size();
        const int nt = threads;
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
            phys[j] = keep[j] ? u_hat[j] : cplx{0.0, 0.0};
        fft.inverse(phys, threads);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
            const double v = phys[j].real();
            phys[j] = cplx{v * v * v, 0.0};
        }
        fft.forward(phys, threads);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
            out[j] = dmult[j] * phys[j];
    }

    // real field with the current spectral state, plus its imaginary residue
    void materialise(std::span<const cplx> u_hat, std::vector<double>& field,
                     double* imag_residue) {
        const std::size_t n = u_hat.size();
        std::copy(u_hat.begin(), u_hat.end(), spec_tmp.begin());
        fft.inverse(spec_tmp, threads);
        field.resize(n);
        double worst_im = 0.0, worst_re = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            field[j] = spec_tmp[j].real();
            worst_im = std::max(worst_im, std::abs(spec_tmp[j].imag()));
            worst_re = std::max(worst_re, std::abs(spec_tmp[j].real()));
        }
        if (imag_residue) *imag_residue = (worst_re > 0.0) ? worst_im / worst_re : worst_im;
    }
};

void etdrk4_step(SpectralWorkspace& ws, const Etdrk4Weights& w, std::vector<cplx>& u,
                 std::array<std::vector<cplx>, 7>& buf) {
    const std::size_t n = u.size();
    auto& [nu, a, na, b, nb, c, nc] = buf;
    const int nt = ws.threads;

    ws.nonlinear(u, nu);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
        a[j] = w.e_half[j] * u[j] + w.q[j] * nu[j];
    ws.nonlinear(a, na);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
        b[j] = w.e_half[j] * u[j] + w.q[j] * na[j];
    ws.nonlinear(b, nb);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
        c[j] = w.e_half[j] * a[j] + w.q[j] * (2.0 * nb[j] - nu[j]);
    ws.nonlinear(c, nc);
#pragma omp parallel for schedule(static) num_threads(nt) if (nt > 1 && n >= 8192)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j)
        u[j] = w.e_full[j] * u[j] + w.f1[j] * nu[j] + w.f2[j] * (na[j] + nb[j]) + w.f3[j] * nc[j];
}

// Strang composition: half linear step, RK4 on the nonlinear part, half linear
void strang_step(SpectralWorkspace& ws, double dt, std::vector<cplx>& u,
                 std::array<std::vector<cplx>, 7>& buf) {
    const std::size_t n = u.size();
    auto& [k1, k2, k3, k4, tmp, unused1, unused2] = buf;
    const auto half_linear = [&](std::vector<cplx>& v) {
        for (std::size_t j = 0; j < n; ++j) v[j] *= std::exp(0.5 * dt * ws.lin[j]);
    };
    half_linear(u);
    ws.nonlinear(u, k1);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * dt * k1[j];
    ws.nonlinear(tmp, k2);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + 0.5 * dt * k2[j];
    ws.nonlinear(tmp, k3);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = u[j] + dt * k3[j];
    ws.nonlinear(tmp, k4);
    for (std::size_t j = 0; j < n; ++j)
        u[j] += dt / 6.0 * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]);
    half_linear(u);
}

double boundary_norm_fraction(std::span<const double> field, double window_fraction) {
    const std::size_t n = field.size();
    const auto win = static_cast<std::size_t>(window_fraction * static_cast<double>(n));
    double total = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double e = field[j] * field[j];
        total += e;
        if (j < win || j + win >= n) edge += e;
    }
    return (total > 0.0) ? std::sqrt(edge / total) : 0.0;
}

} // namespace

std::vector<double> airy_propagator(const SpatialGrid& grid, std::span<const double> field,
                                    double t_step, int threads) {
    if (!grid.periodic) throw InvalidArgument("airy_propagator: grid must be periodic");
    if (field.size() != grid.n) throw InvalidArgument("airy_propagator: field size mismatch");
    Fft fft(grid.n);
    std::vector<cplx> u(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) u[j] = cplx{field[j], 0.0};
    fft.forward(u, threads);
    const double dk = 2.0 * M_PI / grid.length();
    for (std::size_t j = 0; j < grid.n; ++j) {
        const long long m = (j <= grid.n / 2)
                                ? static_cast<long long>(j)
                                : static_cast<long long>(j) - static_cast<long long>(grid.n);
        const double xi = dk * static_cast<double>(m);
        u[j] *= std::exp(cplx{0.0, t_step * xi * xi * xi});
    }
    fft.inverse(u, threads);
    std::vector<double> out(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) out[j] = u[j].real();
    return out;
}

EvolutionResult evolve(const Potential& u0, const EvolutionConfig& cfg) {
    const SpatialGrid& grid = u0.grid;
    if (!grid.periodic) throw InvalidArgument("evolve: grid must be periodic");
    if (!(cfg.dt > 0.0)) throw InvalidArgument("evolve: dt must be positive");
    if (!(cfg.t_final > 0.0)) throw InvalidArgument("evolve: t_final must be positive");
    if (!(cfg.dealias_fraction > 0.0 && cfg.dealias_fraction <= 1.0))
        throw InvalidArgument("evolve: dealias_fraction must lie in (0, 1]");

    std::vector<double> record = cfg.record_times;
    std::sort(record.begin(), record.end());
    record.erase(std::unique(record.begin(), record.end()), record.end());
    for (double t : record)
        if (t < 0.0 || t > cfg.t_final + 1e-12)
            throw InvalidArgument("evolve: record times must lie in [0, t_final]");

    SpectralWorkspace ws(grid, cfg.dealias_fraction, cfg.threads);
    EvolutionResult result;
    const double xi_max = M_PI / grid.dx;
    result.linear_cfl = cfg.dt * xi_max * xi_max * xi_max;

    std::vector<cplx> u(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) u[j] = cplx{u0.values[j], 0.0};
    ws.fft.forward(u, cfg.threads);

    std::array<std::vector<cplx>, 7> buf;
    for (auto& v : buf) v.resize(grid.n);

    const double guard = (cfg.blowup_guard > 0.0) ? cfg.blowup_guard : 10.0 * u0.max_abs() + 1.0;

    Etdrk4Weights main_weights(ws.lin, cfg.dt);

    const auto record_snapshot = [&](double t) {
        EvolutionSnapshot snap;
        snap.t = t;
        ws.materialise(u, snap.field, &snap.imag_residue);
        snap.boundary_fraction = boundary_norm_fraction(snap.field, cfg.wrap_window_fraction);
        if (snap.boundary_fraction > cfg.wrap_tolerance)
            result.warnings.push_back("wrap-around: boundary window holds " +
                                      format_double(snap.boundary_fraction) +
                                      " of the L2 norm at t = " + format_double(t));
        double sup = 0.0;
        for (double v : snap.field) sup = std::max(sup, std::abs(v));
        if (sup > guard) throw BlowUp("evolve: |u| = " + format_double(sup) + " at t = " +
                                      format_double(t) + " exceeded the guard");
        const auto [i1, i2, en] = conserved_quantities(grid, snap.field);
        result.trace.t.push_back(t);
        result.trace.i1.push_back(i1);
        result.trace.i2.push_back(i2);
        result.trace.energy.push_back(en);
        result.snapshots.push_back(std::move(snap));
    };

    std::size_t next_record = 0;
    double t = 0.0;
    if (next_record < record.size() && record[next_record] <= 1e-14) {
        record_snapshot(0.0);
        ++next_record;
    }

    const double t_end = record.empty() ? cfg.t_final : std::max(cfg.t_final, record.back());
    while (t < t_end - 1e-12) {
        double h = cfg.dt;
        bool landing = false;
        if (next_record < record.size() && t + h >= record[next_record] - 1e-12) {
            h = record[next_record] - t;
            landing = true;
        } else if (t + h > t_end) {
            h = t_end - t;
        }
        if (h > 1e-14) {
            if (cfg.scheme == TimeScheme::Etdrk4) {
                if (std::abs(h - cfg.dt) < 1e-14) {
                    etdrk4_step(ws, main_weights, u, buf);
                } else {
                    Etdrk4Weights w(ws.lin, h);
                    etdrk4_step(ws, w, u, buf);
                }
            } else {
                strang_step(ws, h, u, buf);
            }
            t += h;
        }
        if (landing) {
            t = record[next_record];  // suppress drift in the recorded stamp
            record_snapshot(t);
            ++next_record;
        }
    }
    return result;
}

std::array<double, 3> conserved_quantities(const SpatialGrid& grid,
                                           std::span<const double> field) {
    if (field.size() != grid.n) throw InvalidArgument("conserved_quantities: size mismatch");
    const double dx = grid.dx;
    double i1 = 0.0, i2 = 0.0, quartic = 0.0;
    for (double v : field) {
        i1 += v;
        i2 += v * v;
        quartic += v * v * v * v;
    }
    // spectral derivative for the gradient part of E
    Fft fft(grid.n);
    std::vector<cplx> w(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) w[j] = cplx{field[j], 0.0};
    fft.forward(w);
    const double dk = 2.0 * M_PI / grid.length();
    for (std::size_t j = 0; j < grid.n; ++j) {
        const long long m = (j <= grid.n / 2)
                                ? static_cast<long long>(j)
                                : static_cast<long long>(j) - static_cast<long long>(grid.n);
        w[j] *= cplx{0.0, dk * static_cast<double>(m)};
    }
    fft.inverse(w);
    double grad = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) grad += w[j].real() * w[j].real();
    return {i1 * dx, i2 * dx, (grad + quartic) * dx};
}

void write_snapshot_csv(const SpatialGrid& grid, const EvolutionSnapshot& snap,
                        std::ostream& os) {
    os << "x,u\n";
    for (std::size_t j = 0; j < grid.n; ++j)
        os << format_double(grid.x(j)) << ',' << format_double(snap.field[j]) << '\n';
}

void write_evolution_manifest(const SpatialGrid& grid, const EvolutionConfig& cfg,
                              const EvolutionResult& result, std::ostream& os) {
    nlohmann::json j;
    j["grid"] = {{"x_min", grid.x_min}, {"dx", grid.dx}, {"n", grid.n}, {"periodic", grid.periodic}};
    j["config"] = {{"dt", cfg.dt},
                   {"t_final", cfg.t_final},
                   {"dealias_fraction", cfg.dealias_fraction},
                   {"scheme", cfg.scheme == TimeScheme::Etdrk4 ? "etdrk4" : "strang"},
                   {"threads", cfg.threads}};
    j["linear_cfl"] = result.linear_cfl;
    j["times"] = nlohmann::json::array();
    for (const auto& s : result.snapshots) j["times"].push_back(s.t);
    j["conserved"] = {{"t", result.trace.t},
                      {"i1", result.trace.i1},
                      {"i2", result.trace.i2},
                      {"energy", result.trace.energy}};
    j["warnings"] = result.warnings;
    os << j.dump(2) << '\n';
}

} // namespace mkdv
