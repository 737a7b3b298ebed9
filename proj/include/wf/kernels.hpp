#pragma once

#include <cstddef>
#include <vector>

namespace wf::kernels {

enum class Mode { Serial, Parallel };

Mode mode();
void set_mode(Mode m);

// Block size of the deterministic reductions. Partial sums are always formed
// per block and combined in block order, so serial and parallel execution
// produce bitwise-identical results for any thread count.
inline constexpr std::size_t kBlock = 2048;

// Parallel execution only pays off past this many elements.
inline constexpr std::size_t kParallelThreshold = 4096;

namespace detail {
bool use_parallel(std::size_t n);
}

/// Deterministic blocked sum of term(i) for i in [0, n).
template <class Term>
double block_sum(std::size_t n, Term&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    if (nblocks == 1) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += term(i);
        return acc;
    }
    std::vector<double> partial(nblocks, 0.0);
    if (detail::use_parallel(n)) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
            const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
            const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += term(i);
            partial[static_cast<std::size_t>(b)] = acc;
        }
    } else {
        for (std::size_t b = 0; b < nblocks; ++b) {
            const std::size_t lo = b * kBlock;
            const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
            double acc = 0.0;
            for (std::size_t i = lo; i < hi; ++i) acc += term(i);
            partial[b] = acc;
        }
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

/// Elementwise loop, parallel when worthwhile.
template <class Body>
void for_each(std::size_t n, Body&& body) {
    if (detail::use_parallel(n)) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

/// Minimum of term(i) over [0, n); n must be positive.
template <class Term>
double block_min(std::size_t n, Term&& term) {
    double m = term(0);
    for (std::size_t i = 1; i < n; ++i) {
        const double v = term(i);
        if (v < m) m = v;
    }
    return m;
}

}  // namespace wf::kernels
