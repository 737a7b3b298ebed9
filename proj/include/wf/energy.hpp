#pragma once

#include <cstddef>
#include <vector>

#include "wf/grid.hpp"
#include "wf/tridiagonal.hpp"

namespace wf {

/// One PDE instance: initial density samples, selection strength, population size.
struct ProblemSpec {
    EdgeFunction f0;              // f0(X_i), non-negative
    double s = 0.0;               // selection strength, |s| << 1
    double Ne = 0.0;              // effective population size
    bool selection_enabled = false;

    double drift_rate() const { return selection_enabled ? 4.0 * s * Ne : 0.0; }
};

/// Per-step objective data: previous positions, time step, and free range.
/// Coefficient arrays over the free range are cached at construction.
class ObjectiveContext {
public:
    ObjectiveContext(const ProblemSpec& spec, const EdgeFunction& x_prev, double tau,
                     std::size_t i_s, std::size_t i_e);

    const ProblemSpec& spec() const { return *spec_; }
    const EdgeFunction& x_prev() const { return x_prev_; }
    double tau() const { return tau_; }
    std::size_t i_s() const { return i_s_; }
    std::size_t i_e() const { return i_e_; }
    std::size_t n_free() const { return i_e_ - i_s_ - 1; }  // free interior particles
    double h() const { return x_prev_.h; }
    double f0_min() const { return f0_min_; }

    // cached coefficients, indexed over the free range
    const std::vector<double>& quad_weight() const { return quad_weight_; }  // f0/(x^n(1-x^n)), size n_free
    const std::vector<double>& drift() const { return drift_; }   // f0(1-2x^n)/(x^n(1-x^n)) - 4 s Ne f0
    const std::vector<double>& cell_avg() const { return cell_avg_; }  // (A f0) on free cells, size i_e-i_s
    const std::vector<double>& cell_avg_log() const { return cell_avg_log_; }

private:
    const ProblemSpec* spec_;
    EdgeFunction x_prev_;
    double tau_;
    std::size_t i_s_, i_e_;
    double f0_min_;
    std::vector<double> quad_weight_, drift_, cell_avg_, cell_avg_log_;
};

struct ObjectiveValue {
    double value;
    bool feasible;  // false when some free gap of y is non-positive
};

/// Discrete total energy E_N(x) = (A f0 | ln(A f0 / D_h x)) + [f0 | ln(x(1-x))]
/// minus 4 Ne s [f0 | x] when selection is enabled; evaluated over [i_s, i_e].
double discrete_energy(const EdgeFunction& x, const ProblemSpec& spec,
                       std::size_t i_s, std::size_t i_e);
double discrete_energy(const EdgeFunction& x, const ProblemSpec& spec);

/// Convex part E_{N,c}(x) = (A f0 | ln(A f0 / D_h x)) over the free range.
double energy_convex_part(const EdgeFunction& x, const ProblemSpec& spec,
                          std::size_t i_s, std::size_t i_e);
/// Concave complement E_{N,e}(x) = -[f0 | ln(x(1-x))] (plus the selection
/// term 4 Ne s [f0 | x]), so that E_N = E_{N,c} - E_{N,e}.
double energy_concave_part(const EdgeFunction& x, const ProblemSpec& spec,
                           std::size_t i_s, std::size_t i_e);

/// Per-step objective J(y). Infeasible y (boundary of Q) yields a saturating
/// largest-finite value with feasible=false.
ObjectiveValue objective_eval(const EdgeFunction& y, const ObjectiveContext& ctx);
double objective(const EdgeFunction& y, const ObjectiveContext& ctx);

/// Gradient of J over the free interior particles (scaled by 1/h, so a root
/// is exactly a solution of the fully discrete scheme):
///   g_i = f0_i/(x^n_i(1-x^n_i)) (y_i-x^n_i)/tau + d_h(A f0 / D_h y)_i + drift_i.
std::vector<double> objective_gradient(const EdgeFunction& y, const ObjectiveContext& ctx);

/// Hessian of J (same 1/h scaling), symmetric positive definite tridiagonal:
///   diag_i = qw_i/tau + b_{i-1/2}/(y_i-y_{i-1})^2 + b_{i+1/2}/(y_{i+1}-y_i)^2,
///   off_i  = -b_{i+1/2}/(y_{i+1}-y_i)^2.
TridiagonalMatrix objective_hessian(const EdgeFunction& y, const ObjectiveContext& ctx);

}  // namespace wf
