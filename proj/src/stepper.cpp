#include "wf/stepper.hpp"

#include <cmath>
#include <numeric>

#include "wf/errors.hpp"

namespace wf {

double ParticleState::total_mass() const {
    return std::accumulate(m0.begin(), m0.end(), 0.0);
}

double DensityField::total_mass() const {
    return std::accumulate(masses.begin(), masses.end(), 0.0);
}

ParticleState init_state(const ProblemSpec& spec, std::size_t N) {
    if (N < 2) throw ContractError("init_state: N must be >= 2");
    if (spec.f0.intervals() != N)
        throw ContractError("init_state: f0 must be sampled on the N+1 node grid");
    const double h = 1.0 / static_cast<double>(N);
    for (double v : spec.f0.values)
        if (v < 0.0) throw ContractError("init_state: f0 samples must be non-negative");

    ParticleState st;
    std::vector<double> xv(N + 1);
    for (std::size_t i = 0; i <= N; ++i) xv[i] = static_cast<double>(i) * h;
    xv[N] = 1.0;
    st.x = EdgeFunction(std::move(xv), h);
    st.m0.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) st.m0[i] = h * spec.f0[i];
    st.m0[0] *= 0.5;
    st.m0[N] *= 0.5;
    st.i_s = 0;
    st.i_e = N;
    st.t = 0.0;
    st.step_count = 0;
    return st;
}

ParticleState apply_fixation(const EdgeFunction& x_new, const ParticleState& state, double eps0) {
    if (!(eps0 > 0.0)) throw ContractError("apply_fixation: eps0 must be positive");
    ParticleState out = state;
    out.x = x_new;

    // Positions are strictly increasing on the free range, so the particles
    // inside each band form a contiguous run next to the front.
    std::size_t i_s = state.i_s;
    std::size_t i_e = state.i_e;
    while (i_s + 1 < i_e && out.x[i_s + 1] <= eps0) {
        ++i_s;
        out.x.values[i_s] = 0.0;
    }
    while (i_e > i_s + 1 && out.x[i_e - 1] >= 1.0 - eps0) {
        --i_e;
        out.x.values[i_e] = 1.0;
    }
    out.i_s = i_s;
    out.i_e = i_e;
    return out;
}

DensityField recover_density(const ParticleState& state, double eps0) {
    const std::size_t i_s = state.i_s, i_e = state.i_e;
    const auto& x = state.x;
    const auto& m0 = state.m0;
    const std::size_t n = i_e - i_s + 1;

    DensityField f;
    f.i_s = i_s;
    f.i_e = i_e;
    f.positions.resize(n);
    f.density.resize(n);
    f.masses.resize(n);
    for (std::size_t k = 0; k < n; ++k) f.positions[k] = x[i_s + k];

    double left_accum = 0.0;  // mass of particles strictly before i_s
    for (std::size_t k = 0; k < i_s; ++k) left_accum += m0[k];
    double right_accum = 0.0;
    for (std::size_t k = i_e + 1; k <= state.grid_size(); ++k) right_accum += m0[k];

    for (std::size_t k = 1; k + 1 < n; ++k) {
        const std::size_t i = i_s + k;
        f.density[k] = m0[i] / ((x[i + 1] - x[i - 1]) * 0.5);
        f.masses[k] = m0[i];
    }
    // Boundary densities: with no accumulation the spike sum is empty and the
    // one-sided formula remains; with accumulation the 2/eps0 spike takes over.
    f.density.front() = 2.0 / eps0 * left_accum + m0[i_s] / ((x[i_s + 1] - x[i_s]) * 0.5);
    f.density.back() = 2.0 / eps0 * right_accum + m0[i_e] / ((x[i_e] - x[i_e - 1]) * 0.5);
    f.masses.front() = left_accum + m0[i_s];
    f.masses.back() = right_accum + m0[i_e];
    return f;
}

Diagnostics compute_diagnostics(const DensityField& field, const ParticleState& state,
                                const ProblemSpec& spec) {
    Diagnostics d;
    d.time = state.t;
    d.total_mass = field.total_mass();
    double first_moment = 0.0;
    for (std::size_t k = 0; k < field.masses.size(); ++k)
        first_moment += field.masses[k] * field.positions[k];
    d.barycenter = first_moment / d.total_mass;
    d.energy = discrete_energy(state.x, spec, state.i_s, state.i_e);
    d.f_left = field.density.front();
    d.f_right = field.density.back();
    d.mass_left = field.masses.front();
    d.mass_right = field.masses.back();
    return d;
}

StepResult advance(const ParticleState& state, const ProblemSpec& spec,
                   const SolverParams& solver) {
    if (state.fully_fixated())
        throw ContractError("advance: state is fully fixated");

    ObjectiveContext ctx(spec, state.x, solver.tau, state.i_s, state.i_e);
    auto [x_new, report] = solve_step(ctx, solver.newton);

    StepResult out;
    out.energy_before = discrete_energy(state.x, spec, state.i_s, state.i_e);
    out.energy_after_solve = discrete_energy(x_new, spec, state.i_s, state.i_e);
    out.state = apply_fixation(x_new, state, solver.eps0);
    out.state.t = state.t + solver.tau;
    out.state.step_count = state.step_count + 1;
    out.field = recover_density(out.state, solver.eps0);
    out.diag = compute_diagnostics(out.field, out.state, spec);
    out.report = std::move(report);
    return out;
}

}  // namespace wf
