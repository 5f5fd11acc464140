// Benchmarks the OpenMP kernels against their serial paths and checks that
// both produce bit-identical results.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "mkdv/fft.hpp"
#include "mkdv/parallel.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/solver.hpp"

using namespace mkdv;
using clock_type = std::chrono::steady_clock;

namespace {

double ms_since(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

Potential bench_sech(double amplitude, double half_width, double dx) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / dx)) + 1;
    SpatialGrid g = SpatialGrid::line(-half_width, dx, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = amplitude / std::cosh(g.x(i));
    return Potential::make(g, std::move(v));
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %8.1f ms   omp(%d) %8.1f ms   speedup %5.2fx   bit-identical %s\n",
                name, serial_ms, hardware_threads(), parallel_ms, serial_ms / parallel_ms,
                identical ? "yes" : "NO");
}

} // namespace

int main() {
    const int nt = hardware_threads();
    std::printf("hardware threads: %d\n\n", nt);

    {
        const Potential u0 = bench_sech(0.3, 30.0, 0.01);
        auto t0 = clock_type::now();
        const auto serial = reflection_coefficient(u0, 2.0, 0.01, 1);
        const double t_serial = ms_since(t0);
        t0 = clock_type::now();
        const auto parallel = reflection_coefficient(u0, 2.0, 0.01, nt);
        const double t_parallel = ms_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < serial.size(); ++i)
            same = same && serial.r_values[i] == parallel.r_values[i];
        report("reflection sweep (401 z)", t_serial, t_parallel, same);
    }

    {
        const std::size_t n = 1 << 17;
        Fft plan(n);
        std::vector<std::complex<double>> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i)
            a[i] = b[i] = {std::sin(0.001 * static_cast<double>(i)), 0.3};
        constexpr int reps = 50;
        auto t0 = clock_type::now();
        for (int r = 0; r < reps; ++r) plan.forward(a, 1);
        const double t_serial = ms_since(t0);
        t0 = clock_type::now();
        for (int r = 0; r < reps; ++r) plan.forward(b, nt);
        const double t_parallel = ms_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < n; ++i) same = same && a[i] == b[i];
        report("fft 2^17 x 50", t_serial, t_parallel, same);
    }

    {
        SpatialGrid g = SpatialGrid::periodic_centered(1600.0, 1 << 16);
        std::vector<double> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i) v[i] = 0.3 / std::cosh(g.x(i));
        const Potential u0 = Potential::make(g, std::move(v));
        EvolutionConfig cfg;
        cfg.dt = 0.05;
        cfg.t_final = 2.5;
        cfg.record_times = {2.5};
        auto t0 = clock_type::now();
        const auto serial = evolve(u0, cfg);
        const double t_serial = ms_since(t0);
        cfg.threads = nt;
        t0 = clock_type::now();
        const auto parallel = evolve(u0, cfg);
        const double t_parallel = ms_since(t0);
        bool same = true;
        for (std::size_t i = 0; i < g.n; ++i)
            same = same && serial.snapshots[0].field[i] == parallel.snapshots[0].field[i];
        report("etdrk4 2^16 x 50 steps", t_serial, t_parallel, same);
    }

    return 0;
}
