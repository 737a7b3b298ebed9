#include "wf/newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wf/errors.hpp"
#include "wf/kernels.hpp"
#include "wf/tridiagonal.hpp"

namespace wf {

namespace {

void validate(const NewtonParams& p) {
    if (p.lambda_prime < lambda_star() - 1e-15 || p.lambda_prime >= 1.0)
        throw ContractError("NewtonParams: lambda_prime must lie in [2-sqrt(3), 1)");
    if (!(p.decrement_tol > 0.0) || !(p.residual_tol > 0.0) || p.max_iters < 1)
        throw ContractError("NewtonParams: tolerances must be positive, max_iters >= 1");
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool strictly_increasing(const EdgeFunction& x, std::size_t i_s, std::size_t i_e) {
    for (std::size_t i = i_s; i < i_e; ++i)
        if (!(x[i + 1] > x[i])) return false;
    return true;
}

}  // namespace

double damping_factor(double lambda, const NewtonParams& params) {
    validate(params);
    if (lambda < 0.0) throw ContractError("damping_factor: lambda must be non-negative");
    if (lambda > params.lambda_prime) return 1.0 / lambda;
    if (lambda >= lambda_star()) return (1.0 - lambda) / (lambda * (3.0 - lambda));
    return 1.0;
}

double newton_decrement(const EdgeFunction& y, const ObjectiveContext& ctx) {
    const auto g = objective_gradient(y, ctx);
    const auto H = objective_hessian(y, ctx);
    const auto step = solve_spd(H, g);  // H^{-1} g
    double quad = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) quad += g[k] * step[k];
    return std::sqrt(std::max(0.0, quad) / ctx.f0_min());
}

std::pair<EdgeFunction, NewtonReport> solve_step(const ObjectiveContext& ctx,
                                                 const NewtonParams& params) {
    validate(params);
    const std::size_t i_s = ctx.i_s(), i_e = ctx.i_e();
    const std::size_t nf = ctx.n_free();

    EdgeFunction y = ctx.x_prev();
    NewtonReport report;
    if (nf == 0) {
        report.converged = true;
        return {std::move(y), report};
    }

    double j_cur = objective(y, ctx);
    double lambda_prev = std::numeric_limits<double>::infinity();
    bool full_step_prev = false;
    int stalled = 0;
    for (int k = 0; k < params.max_iters; ++k) {
        const auto g = objective_gradient(y, ctx);
        report.final_residual = max_abs(g);
        if (report.final_residual <= params.residual_tol) {
            report.converged = true;
            return {std::move(y), report};
        }

        const auto H = objective_hessian(y, ctx);
        std::vector<double> rhs(nf);
        for (std::size_t i = 0; i < nf; ++i) rhs[i] = -g[i];
        const auto delta = solve_spd(H, std::move(rhs));

        double quad = 0.0;
        for (std::size_t i = 0; i < nf; ++i) quad -= g[i] * delta[i];  // g^T H^{-1} g
        const double lambda = std::sqrt(std::max(0.0, quad) / ctx.f0_min());
        report.final_decrement = lambda;
        if (lambda <= params.decrement_tol) {
            report.converged = true;
            return {std::move(y), report};
        }

        // A full step with lambda < lambda* contracts the decrement to at
        // most lambda^2/(1-lambda)^2, i.e. at least halves it. When that
        // stops happening across consecutive full steps the iterate is pinned
        // at the floating-point floor (the exact minimizer falls between
        // representable positions) and no further progress is possible.
        if (full_step_prev && lambda > 0.5 * lambda_prev) {
            if (++stalled >= 3) {
                report.converged = true;
                return {std::move(y), report};
            }
        } else {
            stalled = 0;
        }
        lambda_prev = lambda;

        // The 1/lambda branch exceeds 1 for lambda in (lambda*, 1); an
        // over-relaxed step is never needed for a convex objective and can
        // knock the iterate onto a noisier path, so cap the applied step at
        // the full Newton step.
        double omega = std::min(1.0, damping_factor(lambda, params));
        EdgeFunction trial = y;
        auto apply = [&](double w) {
            kernels::for_each(nf, [&](std::size_t i) {
                trial.values[i_s + 1 + i] = y[i_s + 1 + i] + w * delta[i];
            });
        };
        apply(omega);

        // The damped step can leave Q in floating point near fixation;
        // halve until strictly increasing again.
        int halvings = 0;
        while (!strictly_increasing(trial, i_s, i_e) && halvings < 60) {
            omega *= 0.5;
            apply(omega);
            ++halvings;
        }
        if (!strictly_increasing(trial, i_s, i_e)) {
            report.iterations = k;
            throw NewtonFailure("Newton trial iterate infeasible after 60 halvings", report);
        }

        // Monotone objective decrease; allow roundoff slack near convergence.
        double j_trial = objective(trial, ctx);
        const double slack = 1e-12 * (1.0 + std::abs(j_cur));
        int extra = 0;
        while (j_trial > j_cur + slack && extra < 30) {
            omega *= 0.5;
            apply(omega);
            j_trial = objective(trial, ctx);
            ++extra;
        }

        // The damped step can fall below one ulp of the positions when the
        // Hessian is extremely stiff near full fixation; the iterate is then a
        // floating-point fixed point and no further progress is possible.
        if (trial.values == y.values) {
            report.converged = true;
            return {std::move(y), report};
        }

        y = trial;
        j_cur = j_trial;
        full_step_prev = omega == 1.0;
        report.damping_history.emplace_back(lambda, omega);
        report.iterations = k + 1;
    }

    throw NewtonFailure("Newton did not converge within max_iters", report);
}

}  // namespace wf
