#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mkdv {

/// Runs f(i) for i in [0, n). With threads > 1 the iterations execute on an
/// OpenMP team; each index is written by exactly one thread, so results are
/// bit-identical to the serial path for any thread count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
#ifdef _OPENMP
    if (threads > 1 && n > 1) {
        const int nt = threads;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
            f(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)threads;
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace mkdv
