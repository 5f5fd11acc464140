#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <random>
#include <vector>

#include "mkdv/errors.hpp"
#include "mkdv/fft.hpp"
#include "support.hpp"

using namespace mkdv;
using cplx = std::complex<double>;

namespace {
std::vector<cplx> random_signal(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> a(n);
    for (auto& v : a) v = {u(rng), u(rng)};
    return a;
}
} // namespace

TEST_CASE("forward transform matches the naive DFT") {
    for (std::size_t n : {std::size_t{16}, std::size_t{64}, std::size_t{256}}) {
        auto a = random_signal(n, 11 + n);
        const auto ref = test::naive_dft(a);
        Fft plan(n);
        plan.forward(a);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(a[k] - ref[k]));
        CHECK(worst < 1e-11 * static_cast<double>(n));
    }
}

TEST_CASE("inverse undoes forward") {
    const std::size_t n = 1024;
    auto a = random_signal(n, 99);
    const auto orig = a;
    Fft plan(n);
    plan.forward(a);
    plan.inverse(a);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(a[k] - orig[k]));
    CHECK(worst < 1e-13);
}

TEST_CASE("Parseval identity") {
    const std::size_t n = 512;
    auto a = random_signal(n, 5);
    double time_energy = 0.0;
    for (const auto& v : a) time_energy += std::norm(v);
    Fft plan(n);
    plan.forward(a);
    double freq_energy = 0.0;
    for (const auto& v : a) freq_energy += std::norm(v);
    CHECK(freq_energy / static_cast<double>(n) ==
          doctest::Approx(time_energy).epsilon(1e-12));
}

TEST_CASE("threaded transform is bit-identical to serial") {
    const std::size_t n = 8192;
    auto serial = random_signal(n, 2024);
    auto threaded = serial;
    Fft plan(n);
    plan.forward(serial, 1);
    plan.forward(threaded, 4);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(serial[k].real() == threaded[k].real());
        CHECK(serial[k].imag() == threaded[k].imag());
    }
    plan.inverse(serial, 1);
    plan.inverse(threaded, 4);
    for (std::size_t k = 0; k < n; ++k) {
        CHECK(serial[k].real() == threaded[k].real());
        CHECK(serial[k].imag() == threaded[k].imag());
    }
}

TEST_CASE("rejects non power-of-two sizes") {
    CHECK_THROWS_AS(Fft(24), InvalidArgument);
}
