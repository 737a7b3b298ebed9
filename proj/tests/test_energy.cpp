#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "wf/energy.hpp"
#include "wf/errors.hpp"
#include "wf/grid.hpp"

using namespace wf;

namespace {

EdgeFunction identity_grid(std::size_t N) {
    const double h = 1.0 / static_cast<double>(N);
    std::vector<double> v(N + 1);
    for (std::size_t i = 0; i <= N; ++i) v[i] = static_cast<double>(i) * h;
    v[N] = 1.0;
    return EdgeFunction(std::move(v), h);
}

ProblemSpec uniform_spec(std::size_t N, double value = 1.0) {
    ProblemSpec spec;
    spec.f0 = EdgeFunction(std::vector<double>(N + 1, value), 1.0 / static_cast<double>(N));
    return spec;
}

/// Identity grid with interior nodes jittered but kept strictly increasing.
EdgeFunction jittered_grid(std::size_t N, std::mt19937_64& rng, double amount = 0.3) {
    EdgeFunction x = identity_grid(N);
    std::uniform_real_distribution<double> u(-amount, amount);
    for (std::size_t i = 1; i < N; ++i) x.values[i] += u(rng) * x.h;
    return x;
}

}  // namespace

TEST_CASE("discrete energy matches the hand-evaluated uniform case") {
    const std::size_t N = 4;
    const ProblemSpec spec = uniform_spec(N);
    const EdgeFunction x = identity_grid(N);
    // 0.25 * (ln 0.1875 + ln 0.25 + ln 0.1875)
    CHECK(discrete_energy(x, spec) ==
          doctest::Approx(-1.1835618070658085).epsilon(1e-14));
    // first term vanishes on the identity grid
    CHECK(energy_convex_part(x, spec, 0, N) == doctest::Approx(0.0));
    // selection with s = 0 changes nothing
    ProblemSpec sel = spec;
    sel.selection_enabled = true;
    sel.s = 0.0;
    sel.Ne = 1e4;
    CHECK(discrete_energy(x, sel) == discrete_energy(x, spec));
}

TEST_CASE("energy rejects positions outside Q") {
    const ProblemSpec spec = uniform_spec(4);
    EdgeFunction x = identity_grid(4);
    x.values[2] = x.values[1];  // not strictly increasing
    CHECK_THROWS_AS(discrete_energy(x, spec), OutsideDomainError);
}

TEST_CASE("convex/concave split reassembles the energy and both parts are convex") {
    std::mt19937_64 rng(3);
    const std::size_t N = 16;
    ProblemSpec spec = uniform_spec(N);
    for (std::size_t i = 0; i <= N; ++i)
        spec.f0.values[i] = 0.5 + static_cast<double>(i % 5) * 0.3;
    for (int rep = 0; rep < 100; ++rep) {
        const EdgeFunction a = jittered_grid(N, rng);
        const EdgeFunction b = jittered_grid(N, rng);
        EdgeFunction mid = a;
        for (std::size_t i = 0; i <= N; ++i) mid.values[i] = 0.5 * (a[i] + b[i]);

        CHECK(discrete_energy(a, spec) ==
              doctest::Approx(energy_convex_part(a, spec, 0, N) -
                              energy_concave_part(a, spec, 0, N)).epsilon(1e-13));
        // midpoint inequality: both split parts are convex functions of x
        CHECK(energy_convex_part(mid, spec, 0, N) <=
              0.5 * (energy_convex_part(a, spec, 0, N) + energy_convex_part(b, spec, 0, N)) +
                  1e-10);
        CHECK(energy_concave_part(mid, spec, 0, N) <=
              0.5 * (energy_concave_part(a, spec, 0, N) + energy_concave_part(b, spec, 0, N)) +
                  1e-10);
    }
}

TEST_CASE("objective matches the frozen three-particle example") {
    const std::size_t N = 2;
    const ProblemSpec spec = uniform_spec(N);
    const EdgeFunction xn = identity_grid(N);
    ObjectiveContext ctx(spec, xn, 1.0, 0, N);

    CHECK(objective(xn, ctx) == doctest::Approx(0.0));

    EdgeFunction y = xn;
    y.values[1] = 0.6;
    // quadratic 0.01, entropy 0.5*(ln(0.6/0.5)... ) => 0.030411 in total
    CHECK(objective(y, ctx) == doctest::Approx(0.030410997260127588).epsilon(1e-14));

    // boundary of Q saturates with the infeasibility flag
    EdgeFunction flat = xn;
    flat.values[1] = 0.0;
    const ObjectiveValue v = objective_eval(flat, ctx);
    CHECK_FALSE(v.feasible);
    CHECK(v.value == std::numeric_limits<double>::max());
}

TEST_CASE("gradient and Hessian match the frozen three-particle example") {
    const std::size_t N = 2;
    const ProblemSpec spec = uniform_spec(N);
    const EdgeFunction xn = identity_grid(N);
    ObjectiveContext ctx(spec, xn, 1.0, 0, N);

    // symmetric middle particle is stationary
    CHECK(objective_gradient(xn, ctx)[0] == doctest::Approx(0.0));
    CHECK(objective_hessian(xn, ctx).diag[0] == doctest::Approx(12.0).epsilon(1e-14));

    EdgeFunction y = xn;
    y.values[1] = 0.6;
    CHECK(objective_gradient(y, ctx)[0] ==
          doctest::Approx(1.2333333333333334).epsilon(1e-14));
    CHECK(objective_hessian(y, ctx).diag[0] ==
          doctest::Approx(13.027777777777779).epsilon(1e-14));

    EdgeFunction bad = xn;
    bad.values[1] = -0.1;
    CHECK_THROWS_AS(objective_gradient(bad, ctx), OutsideDomainError);
    CHECK_THROWS_AS(objective_hessian(bad, ctx), OutsideDomainError);
}

TEST_CASE("gradient at y = x_prev drops the quadratic term") {
    std::mt19937_64 rng(11);
    const std::size_t N = 8;
    ProblemSpec spec = uniform_spec(N);
    for (std::size_t i = 0; i <= N; ++i) spec.f0.values[i] = 1.0 + 0.1 * static_cast<double>(i);
    const EdgeFunction xn = jittered_grid(N, rng);
    ObjectiveContext ctx(spec, xn, 0.01, 0, N);
    const auto g = objective_gradient(xn, ctx);

    const CellFunction b = average_edge_to_cell(spec.f0);
    const CellFunction slope = diff_edge_to_cell(xn);
    CellFunction phi = b;
    for (std::size_t c = 0; c < N; ++c) phi.values[c] = b[c] / slope[c];
    const EdgeFunction dphi = diff_cell_to_edge(phi);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const std::size_t i = k + 1;
        const double xi = xn[i];
        const double expected =
            dphi[i] + spec.f0[i] * (1.0 - 2.0 * xi) / (xi * (1.0 - xi));
        CHECK(g[k] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("gradient matches centered finite differences of the objective") {
    std::mt19937_64 rng(23);
    const std::size_t N = 8;
    ProblemSpec spec = uniform_spec(N);
    for (std::size_t i = 0; i <= N; ++i) spec.f0.values[i] = 0.8 + 0.05 * static_cast<double>(i);
    spec.selection_enabled = true;
    spec.s = 1e-4;
    spec.Ne = 1e4;
    const EdgeFunction xn = jittered_grid(N, rng);
    ObjectiveContext ctx(spec, xn, 0.01, 0, N);

    for (int rep = 0; rep < 10; ++rep) {
        const EdgeFunction y = jittered_grid(N, rng, 0.2);
        const auto g = objective_gradient(y, ctx);
        const double step = 1e-7;
        for (std::size_t k = 0; k < g.size(); ++k) {
            EdgeFunction yp = y, ym = y;
            yp.values[k + 1] += step;
            ym.values[k + 1] -= step;
            const double fd = (objective(yp, ctx) - objective(ym, ctx)) / (2.0 * step);
            // module gradient is scaled by 1/h relative to dJ/dy
            CHECK(ctx.h() * g[k] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("Hessian matches finite differences of the gradient") {
    std::mt19937_64 rng(29);
    const std::size_t N = 8;
    ProblemSpec spec = uniform_spec(N);
    for (std::size_t i = 0; i <= N; ++i) spec.f0.values[i] = 1.0 + 0.2 * std::sin(1.0 + i);
    const EdgeFunction xn = jittered_grid(N, rng);
    ObjectiveContext ctx(spec, xn, 0.05, 0, N);

    for (int rep = 0; rep < 10; ++rep) {
        const EdgeFunction y = jittered_grid(N, rng, 0.2);
        const auto H = objective_hessian(y, ctx);
        const double step = 1e-7;
        const std::size_t nf = H.dim();
        for (std::size_t j = 0; j < nf; ++j) {
            EdgeFunction yp = y, ym = y;
            yp.values[j + 1] += step;
            ym.values[j + 1] -= step;
            const auto gp = objective_gradient(yp, ctx);
            const auto gm = objective_gradient(ym, ctx);
            for (std::size_t i = 0; i < nf; ++i) {
                const double fd = (gp[i] - gm[i]) / (2.0 * step);
                double exact = 0.0;
                if (i == j) exact = H.diag[i];
                else if (i + 1 == j) exact = H.off[i];
                else if (j + 1 == i) exact = H.off[j];
                if (exact == 0.0)
                    CHECK(std::abs(fd) <= 1e-5 * H.diag[i]);
                else
                    CHECK(fd == doctest::Approx(exact).epsilon(1e-5));
            }
        }
        // diagonal dominance structure of the split
        for (std::size_t i = 0; i < nf; ++i) CHECK(H.diag[i] > 0.0);
        for (std::size_t i = 0; i + 1 < nf; ++i)
            CHECK(std::abs(H.off[i]) <= std::sqrt(H.diag[i] * H.diag[i + 1]) * (1.0 + 1e-12));
    }
}

TEST_CASE("objective is convex along random segments in Q") {
    std::mt19937_64 rng(31);
    const std::size_t N = 16;
    const ProblemSpec spec = uniform_spec(N);
    const EdgeFunction xn = identity_grid(N);
    ObjectiveContext ctx(spec, xn, 0.01, 0, N);
    for (int rep = 0; rep < 100; ++rep) {
        const EdgeFunction a = jittered_grid(N, rng);
        const EdgeFunction b = jittered_grid(N, rng);
        EdgeFunction mid = a;
        for (std::size_t i = 0; i <= N; ++i) mid.values[i] = 0.5 * (a[i] + b[i]);
        const double second =
            objective(a, ctx) - 2.0 * objective(mid, ctx) + objective(b, ctx);
        CHECK(second >= -1e-10);
    }
}

TEST_CASE("context validates its pinning and time step") {
    const std::size_t N = 4;
    const ProblemSpec spec = uniform_spec(N);
    EdgeFunction x = identity_grid(N);
    CHECK_THROWS_AS(ObjectiveContext(spec, x, 0.0, 0, N), ContractError);
    CHECK_THROWS_AS(ObjectiveContext(spec, x, 0.01, 1, N), ContractError);  // x[1] != 0
    x.values[2] = x.values[1];
    CHECK_THROWS_AS(ObjectiveContext(spec, x, 0.01, 0, N), OutsideDomainError);
}
