#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wf/energy.hpp"

namespace wf {

/// lambda* = 2 - sqrt(3), the full-step threshold of the damping rule.
inline double lambda_star() { return 2.0 - std::sqrt(3.0); }

struct NewtonParams {
    double lambda_prime = lambda_star();  // default: middle branch collapses to a point
    double decrement_tol = 1e-8;
    double residual_tol = 1e-10;
    int max_iters = 100;
};

struct NewtonReport {
    int iterations = 0;
    double final_decrement = 0.0;
    double final_residual = 0.0;
    bool converged = false;
    std::vector<std::pair<double, double>> damping_history;  // (lambda, omega)
};

struct NewtonFailure : std::runtime_error {
    NewtonReport report;
    NewtonFailure(const std::string& what_, NewtonReport rep)
        : std::runtime_error(what_), report(std::move(rep)) {}
};

/// Damping factor omega(lambda): 1/lambda above lambda', the interpolating
/// middle branch on [lambda*, lambda'], and a full step below lambda*.
double damping_factor(double lambda, const NewtonParams& params);

/// Newton decrement lambda(J, y) = sqrt((1/a) J'^T [J'']^{-1} J') with
/// a = h * min f0 over the free range. With the 1/h-scaled gradient g and
/// Hessian H of the energy module this is sqrt(g^T H^{-1} g / min f0).
double newton_decrement(const EdgeFunction& y, const ObjectiveContext& ctx);

/// Damped Newton solve of the per-step minimization; returns the new
/// positions (full grid, free range updated) and an iteration report.
std::pair<EdgeFunction, NewtonReport> solve_step(const ObjectiveContext& ctx,
                                                 const NewtonParams& params);

}  // namespace wf
