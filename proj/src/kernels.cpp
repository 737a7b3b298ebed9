#include "wf/kernels.hpp"

#include <atomic>

namespace wf::kernels {

namespace {
std::atomic<Mode> g_mode{Mode::Parallel};
}

Mode mode() { return g_mode.load(std::memory_order_relaxed); }
void set_mode(Mode m) { g_mode.store(m, std::memory_order_relaxed); }

namespace detail {

bool use_parallel(std::size_t n) {
#ifdef _OPENMP
    return mode() == Mode::Parallel && n >= kParallelThreshold;
#else
    (void)n;
    return false;
#endif
}

}  // namespace detail

}  // namespace wf::kernels
