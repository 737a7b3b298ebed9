#include "wf/energy.hpp"

#include <cmath>
#include <limits>

#include "wf/errors.hpp"
#include "wf/kernels.hpp"

namespace wf {

namespace {

void check_range(const EdgeFunction& x, std::size_t i_s, std::size_t i_e) {
    if (i_e <= i_s || i_e > x.intervals())
        throw ContractError("free range [i_s, i_e] is invalid");
}

void require_increasing(const EdgeFunction& x, std::size_t i_s, std::size_t i_e) {
    for (std::size_t i = i_s; i < i_e; ++i)
        if (!(x[i + 1] > x[i])) throw OutsideDomainError("positions outside Q");
}

}  // namespace

ObjectiveContext::ObjectiveContext(const ProblemSpec& spec, const EdgeFunction& x_prev,
                                   double tau, std::size_t i_s, std::size_t i_e)
    : spec_(&spec), x_prev_(x_prev), tau_(tau), i_s_(i_s), i_e_(i_e) {
    check_range(x_prev_, i_s_, i_e_);
    if (spec.f0.values.size() != x_prev_.values.size())
        throw ContractError("ObjectiveContext: f0 and x_prev grids differ");
    if (!(tau_ > 0.0)) throw ContractError("ObjectiveContext: tau must be positive");
    if (x_prev_[i_s_] != 0.0 || x_prev_[i_e_] != 1.0)
        throw ContractError("ObjectiveContext: free range must be pinned to [0, 1]");
    require_increasing(x_prev_, i_s_, i_e_);

    const auto& f0 = spec.f0.values;
    const std::size_t nf = n_free();
    const std::size_t nc = i_e_ - i_s_;
    const double rate = spec.drift_rate();

    quad_weight_.resize(nf);
    drift_.resize(nf);
    kernels::for_each(nf, [&](std::size_t k) {
        const std::size_t i = i_s_ + 1 + k;
        const double xi = x_prev_[i];
        const double denom = xi * (1.0 - xi);
        quad_weight_[k] = f0[i] / denom;
        drift_[k] = f0[i] * (1.0 - 2.0 * xi) / denom - rate * f0[i];
    });

    cell_avg_.resize(nc);
    cell_avg_log_.resize(nc);
    kernels::for_each(nc, [&](std::size_t c) {
        const std::size_t i = i_s_ + c;
        cell_avg_[c] = 0.5 * (f0[i] + f0[i + 1]);
        cell_avg_log_[c] = std::log(cell_avg_[c]);
    });

    f0_min_ = kernels::block_min(i_e_ - i_s_ + 1, [&](std::size_t k) { return f0[i_s_ + k]; });
}

double energy_convex_part(const EdgeFunction& x, const ProblemSpec& spec,
                          std::size_t i_s, std::size_t i_e) {
    check_range(x, i_s, i_e);
    require_increasing(x, i_s, i_e);
    const auto& f0 = spec.f0.values;
    const double h = x.h;
    // ln(A f0 / D_h x) evaluated as ln(A f0) - ln(D_h x); A f0 may span many
    // orders of magnitude in delta-split runs.
    return h * kernels::block_sum(i_e - i_s, [&](std::size_t c) {
        const std::size_t i = i_s + c;
        const double b = 0.5 * (f0[i] + f0[i + 1]);
        const double slope = (x[i + 1] - x[i]) / h;
        return b * (std::log(b) - std::log(slope));
    });
}

double energy_concave_part(const EdgeFunction& x, const ProblemSpec& spec,
                           std::size_t i_s, std::size_t i_e) {
    check_range(x, i_s, i_e);
    const auto& f0 = spec.f0.values;
    const double h = x.h;
    const double rate = spec.drift_rate();
    const std::size_t nf = i_e - i_s - 1;
    return h * kernels::block_sum(nf, [&](std::size_t k) {
        const std::size_t i = i_s + 1 + k;
        const double xi = x[i];
        return -f0[i] * std::log(xi * (1.0 - xi)) + rate * f0[i] * xi;
    });
}

double discrete_energy(const EdgeFunction& x, const ProblemSpec& spec,
                       std::size_t i_s, std::size_t i_e) {
    return energy_convex_part(x, spec, i_s, i_e) - energy_concave_part(x, spec, i_s, i_e);
}

double discrete_energy(const EdgeFunction& x, const ProblemSpec& spec) {
    return discrete_energy(x, spec, 0, x.intervals());
}

ObjectiveValue objective_eval(const EdgeFunction& y, const ObjectiveContext& ctx) {
    const std::size_t i_s = ctx.i_s(), i_e = ctx.i_e();
    if (y.values.size() != ctx.x_prev().values.size())
        throw ContractError("objective: y grid differs from context");
    for (std::size_t i = i_s; i < i_e; ++i)
        if (!(y[i + 1] > y[i]))
            return {std::numeric_limits<double>::max(), false};

    const double h = ctx.h();
    const auto& xp = ctx.x_prev();
    const auto& qw = ctx.quad_weight();
    const auto& drift = ctx.drift();
    const auto& b = ctx.cell_avg();
    const auto& lnb = ctx.cell_avg_log();

    const double quad = kernels::block_sum(ctx.n_free(), [&](std::size_t k) {
        const std::size_t i = i_s + 1 + k;
        const double d = y[i] - xp[i];
        return qw[k] * d * d;
    });
    const double entropy = kernels::block_sum(i_e - i_s, [&](std::size_t c) {
        const std::size_t i = i_s + c;
        return b[c] * (lnb[c] - std::log((y[i + 1] - y[i]) / h));
    });
    const double linear = kernels::block_sum(ctx.n_free(), [&](std::size_t k) {
        return drift[k] * y[i_s + 1 + k];
    });
    return {h * (0.5 / ctx.tau() * quad + entropy + linear), true};
}

double objective(const EdgeFunction& y, const ObjectiveContext& ctx) {
    return objective_eval(y, ctx).value;
}

std::vector<double> objective_gradient(const EdgeFunction& y, const ObjectiveContext& ctx) {
    const std::size_t i_s = ctx.i_s(), i_e = ctx.i_e();
    require_increasing(y, i_s, i_e);
    const auto& xp = ctx.x_prev();
    const auto& qw = ctx.quad_weight();
    const auto& drift = ctx.drift();
    const auto& b = ctx.cell_avg();
    const double h = ctx.h();
    const double tau = ctx.tau();

    // flux_{c} = (A f0 / D_h y) on free cell c
    std::vector<double> flux(i_e - i_s);
    kernels::for_each(i_e - i_s, [&](std::size_t c) {
        const std::size_t i = i_s + c;
        flux[c] = b[c] * h / (y[i + 1] - y[i]);
    });
    std::vector<double> g(ctx.n_free());
    kernels::for_each(ctx.n_free(), [&](std::size_t k) {
        const std::size_t i = i_s + 1 + k;
        g[k] = qw[k] * (y[i] - xp[i]) / tau + (flux[k + 1] - flux[k]) / h + drift[k];
    });
    return g;
}

TridiagonalMatrix objective_hessian(const EdgeFunction& y, const ObjectiveContext& ctx) {
    const std::size_t i_s = ctx.i_s(), i_e = ctx.i_e();
    require_increasing(y, i_s, i_e);
    const auto& qw = ctx.quad_weight();
    const auto& b = ctx.cell_avg();
    const double tau = ctx.tau();
    const std::size_t nf = ctx.n_free();

    // stiff_{c} = b_c / gap_c^2 on free cell c
    std::vector<double> stiff(i_e - i_s);
    kernels::for_each(i_e - i_s, [&](std::size_t c) {
        const std::size_t i = i_s + c;
        const double gap = y[i + 1] - y[i];
        stiff[c] = b[c] / (gap * gap);
    });
    TridiagonalMatrix m;
    m.diag.resize(nf);
    m.off.resize(nf > 0 ? nf - 1 : 0);
    kernels::for_each(nf, [&](std::size_t k) {
        m.diag[k] = qw[k] / tau + stiff[k] + stiff[k + 1];
        if (k + 1 < nf) m.off[k] = -stiff[k + 1];
    });
    return m;
}

}  // namespace wf
