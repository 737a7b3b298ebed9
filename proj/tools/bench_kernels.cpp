// Compares the serial reference kernels against the OpenMP path on the
// per-iteration hot loops (objective, gradient, Hessian assembly).
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "wf/energy.hpp"
#include "wf/kernels.hpp"

namespace {

using clk = std::chrono::steady_clock;

double time_ms(int reps, auto&& fn) {
    fn();  // warm up
    const auto start = clk::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto stop = clk::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

}  // namespace

int main() {
    std::printf("%10s %12s %12s %12s %12s %8s\n", "N", "kernel", "serial(ms)", "parallel(ms)",
                "speedup", "match");
    std::mt19937_64 rng(12345);

    for (std::size_t N : {1000, 10000, 100000, 1000000}) {
        const double h = 1.0 / static_cast<double>(N);
        std::vector<double> xv(N + 1), f0v(N + 1);
        std::uniform_real_distribution<double> jitter(-0.2, 0.2);
        for (std::size_t i = 0; i <= N; ++i) {
            xv[i] = static_cast<double>(i) * h;
            f0v[i] = 1.0 + 0.5 * jitter(rng);
        }
        xv[N] = 1.0;
        wf::ProblemSpec spec;
        spec.f0 = wf::EdgeFunction(f0v, h);
        wf::EdgeFunction x(xv, h);
        wf::ObjectiveContext ctx(spec, x, 1e-3, 0, N);

        wf::EdgeFunction y = x;
        for (std::size_t i = 1; i < N; ++i)
            y.values[i] += 0.2 * h * jitter(rng);

        const int reps = N <= 10000 ? 200 : 20;

        auto bench = [&](const char* name, auto&& fn, auto&& digest) {
            wf::kernels::set_mode(wf::kernels::Mode::Serial);
            const double ts = time_ms(reps, fn);
            const auto a = digest();
            wf::kernels::set_mode(wf::kernels::Mode::Parallel);
            const double tp = time_ms(reps, fn);
            const auto b = digest();
            std::printf("%10zu %12s %12.4f %12.4f %12.2f %8s\n", N, name, ts, tp, ts / tp,
                        a == b ? "bitwise" : "DIFFER");
        };

        double j_val = 0.0;
        bench("objective", [&] { j_val = wf::objective(y, ctx); }, [&] { return j_val; });

        std::vector<double> g;
        bench("gradient", [&] { g = wf::objective_gradient(y, ctx); },
              [&] { return g.empty() ? 0.0 : g[g.size() / 2]; });

        wf::TridiagonalMatrix H;
        bench("hessian", [&] { H = wf::objective_hessian(y, ctx); },
              [&] { return H.diag.empty() ? 0.0 : H.diag[H.diag.size() / 2]; });
    }
    return 0;
}
