#include "mkdv/fft.hpp"

#include <cmath>

#include "mkdv/errors.hpp"
#include "mkdv/grid.hpp"

namespace mkdv {

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw InvalidArgument("fft size must be a power of two");
    bitrev_.assign(n, 0);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bitrev_[i] = r;
    }
    roots_.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
        roots_[k] = {std::cos(step * static_cast<double>(k)), std::sin(step * static_cast<double>(k))};
}

void Fft::transform(std::span<std::complex<double>> a, int threads) const {
    if (a.size() != n_) throw InvalidArgument("fft: buffer size mismatch");
    auto* d = a.data();

    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(d[i], d[j]);
    }

    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        const std::size_t blocks = n_ / len;
        const auto* w = roots_.data();

        auto butterfly_block = [&](std::size_t b) {
            std::complex<double>* base = d + b * len;
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> t = w[k * stride] * base[k + half];
                base[k + half] = base[k] - t;
                base[k] += t;
            }
        };

#ifdef _OPENMP
        if (threads > 1 && n_ >= 4096) {
            if (blocks >= static_cast<std::size_t>(threads)) {
#pragma omp parallel for schedule(static) num_threads(threads)
                for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b)
                    butterfly_block(static_cast<std::size_t>(b));
            } else {
                for (std::size_t b = 0; b < blocks; ++b) {
                    std::complex<double>* base = d + b * len;
#pragma omp parallel for schedule(static) num_threads(threads)
                    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(half); ++k) {
                        const std::complex<double> t = w[static_cast<std::size_t>(k) * stride] * base[k + half];
                        base[k + half] = base[k] - t;
                        base[k] += t;
                    }
                }
            }
            continue;
        }
#else
        (void)threads;
#endif
        for (std::size_t b = 0; b < blocks; ++b) butterfly_block(b);
    }
}

void Fft::forward(std::span<std::complex<double>> a, int threads) const { transform(a, threads); }

void Fft::inverse(std::span<std::complex<double>> a, int threads) const {
    for (auto& v : a) v = std::conj(v);
    transform(a, threads);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : a) v = std::conj(v) * scale;
}

} // namespace mkdv
