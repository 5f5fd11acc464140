#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mkdv {

/// Radix-2 complex FFT plan for power-of-two sizes. forward() applies
/// sum_j a_j e^{-2 pi i jk / n}; inverse() includes the 1/n factor.
///
/// Butterflies within a stage touch disjoint elements, so the threaded path
/// performs the identical floating-point operations as the serial one and
/// the output is bit-identical for any thread count.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::span<std::complex<double>> a, int threads = 1) const;
    void inverse(std::span<std::complex<double>> a, int threads = 1) const;

private:
    void transform(std::span<std::complex<double>> a, int threads) const;

    std::size_t n_ = 0;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> roots_;  // e^{-2 pi i k / n}, k < n/2
};

} // namespace mkdv
