#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "mkdv/grid.hpp"
#include "mkdv/interp.hpp"
#include "mkdv/phase.hpp"

using namespace mkdv;
using cplx = std::complex<double>;

TEST_CASE("phase_theta evaluates 4tz^3 + xz") {
    auto g = make_geometry(0.0, 1.0);
    CHECK(phase_theta(g, {1.0, 0.0}).real() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(phase_theta(g, {1.0, 0.0}).imag() == doctest::Approx(0.0));

    g = make_geometry(-12.0, 1.0);
    CHECK(phase_theta(g, {1.0, 0.0}).real() == doctest::Approx(-8.0).epsilon(1e-14));
    // z0 = 1 is the stationary point: d theta / dz = 12 t z^2 + x = 0
    CHECK(g.z0.real() == doctest::Approx(1.0).epsilon(1e-14));
    const cplx z0 = g.z0;
    const cplx dtheta = 12.0 * g.t * z0 * z0 + g.x;
    CHECK(std::abs(dtheta) <= 1e-12 * std::abs(g.x));

    // cross-checked against an exact high-precision evaluation
    g = make_geometry(-3.0, 100.0);
    const cplx theta = phase_theta(g, {0.5, 0.5});
    CHECK(theta.real() == doctest::Approx(-101.5).epsilon(1e-13));
    CHECK(theta.imag() == doctest::Approx(98.5).epsilon(1e-13));
}

TEST_CASE("make_geometry populates z0 and tau per side") {
    auto g = make_geometry(-1200.0, 100.0);
    CHECK(g.z0.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.z0.imag() == 0.0);
    CHECK(g.tau == doctest::Approx(100.0).epsilon(1e-14));

    g = make_geometry(0.0, 5.0);
    CHECK(g.z0 == cplx{0.0, 0.0});
    CHECK(g.tau == 0.0);

    g = make_geometry(12.0, 1.0);
    CHECK(g.z0.real() == 0.0);
    CHECK(g.z0.imag() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.tau == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(make_geometry(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_geometry(1.0, -2.0), InvalidArgument);
}

TEST_CASE("make_geometry round-trip: z0 of x = -12 t a^2 is a") {
    std::mt19937_64 rng(20240915ULL);
    std::uniform_real_distribution<double> ua(0.01, 10.0), ut(0.1, 500.0);
    for (int i = 0; i < 500; ++i) {
        const double a = ua(rng), t = ut(rng);
        const auto g = make_geometry(-12.0 * t * a * a, t);
        CHECK(g.z0.real() == doctest::Approx(a).epsilon(1e-12));
        // stationary-point derivative vanishes at +-z0
        const cplx d_plus = 12.0 * g.t * g.z0 * g.z0 + g.x;
        const cplx d_minus = 12.0 * g.t * g.z0 * g.z0 + g.x;
        CHECK(std::abs(d_plus) <= 1e-12 * std::abs(g.x));
        CHECK(std::abs(d_minus) <= 1e-12 * std::abs(g.x));
    }
}

TEST_CASE("classify_region examples") {
    RegionThresholds th;  // defaults: M' = 1, tau_I = 10, tau_V = 10, 2/5 guard
    CHECK(classify_region(make_geometry(0.0, 100.0), th) == Region::III);
    CHECK(classify_region(make_geometry(-1200.0, 100.0), th) == Region::I);
    CHECK(classify_region(make_geometry(10000.0, 1.0), th) == Region::V);
}

TEST_CASE("classify_region is a total deterministic partition") {
    RegionThresholds th;
    std::mt19937_64 rng(7ULL);
    std::uniform_real_distribution<double> ux(-2000.0, 2000.0), ut(0.01, 400.0);
    for (int i = 0; i < 2000; ++i) {
        const auto g = make_geometry(ux(rng), ut(rng));
        const Region r1 = classify_region(g, th);
        const Region r2 = classify_region(g, th);
        CHECK(r1 == r2);
        if (g.x > 0.0) CHECK((r1 == Region::III || r1 == Region::IV || r1 == Region::V));
        if (g.x < 0.0) CHECK((r1 == Region::I || r1 == Region::II || r1 == Region::III));
        if (g.x == 0.0) CHECK(r1 == Region::III);
    }
}

TEST_CASE("region II growth guard falls back to Region I") {
    RegionThresholds th;
    // tau = 6.25 in (M', tau_I) but above t^{2/5} = 50^{0.4} ~ 4.79
    const auto g = make_geometry(-3.0 * 50.0, 50.0);
    CHECK(g.tau == doctest::Approx(6.25).epsilon(1e-12));
    CHECK(classify_region(g, th) == Region::I);
    // tau = 3.125 at t = 25 passes the guard (25^{0.4} ~ 3.62)
    const auto g2 = make_geometry(-3.0 * 25.0, 25.0);
    CHECK(classify_region(g2, th) == Region::II);
}

TEST_CASE("threshold validation") {
    RegionThresholds th;
    th.tau_i = 0.5;  // must exceed m_prime
    CHECK_THROWS_AS(th.validate(), InvalidArgument);
    th = RegionThresholds{};
    th.growth_exponent = 0.6;
    CHECK_THROWS_AS(th.validate(), InvalidArgument);
}

TEST_CASE("grid constructors validate") {
    CHECK_THROWS_AS(SpatialGrid::line(0.0, -0.1, 4), InvalidArgument);
    CHECK_THROWS_AS(SpatialGrid::periodic_centered(10.0, 100), InvalidArgument);  // not 2^k
    const auto g = SpatialGrid::periodic_centered(16.0, 8);
    CHECK(g.dx == doctest::Approx(2.0));
    CHECK(g.x_min == doctest::Approx(-8.0));
    CHECK(g.length() == doctest::Approx(16.0));
}

TEST_CASE("cubic interpolation is exact at nodes and O(dx^4) between") {
    const double x0 = -1.0, dx = 0.1;
    std::vector<double> v(41);
    auto f = [](double x) { return std::sin(3.0 * x) + 0.2 * x * x; };
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(x0 + dx * static_cast<double>(i));
    std::span<const double> sv(v);

    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = x0 + dx * static_cast<double>(i);
        CHECK(cubic_interp_uniform(x0, dx, sv, x) == doctest::Approx(v[i]).epsilon(1e-13));
    }
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double x = -0.99 + 0.00495 * i;
        worst = std::max(worst, std::abs(cubic_interp_uniform(x0, dx, sv, x) - f(x)));
    }
    CHECK(worst < 5e-4);  // ~ f''''(x) dx^4 scale for this integrand, edge stencils included
}
