#pragma once

#include <cstddef>
#include <vector>

#include "wf/energy.hpp"
#include "wf/newton.hpp"

namespace wf {

struct SolverParams {
    double tau = 1e-3;     // time step
    double eps0 = 1e-10;   // fixation band width
    NewtonParams newton;
};

/// Monotone particle positions with their (time-invariant) masses and the
/// free-range bookkeeping of the fixation fronts.
struct ParticleState {
    EdgeFunction x;            // positions; x[0..i_s] = 0, x[i_e..N] = 1
    std::vector<double> m0;    // per-particle masses, fixed at t = 0
    std::size_t i_s = 0;       // starting free point
    std::size_t i_e = 0;       // ending free point
    double t = 0.0;
    long step_count = 0;

    std::size_t grid_size() const { return x.intervals(); }
    /// No free interior particle remains; nothing left to evolve.
    bool fully_fixated() const { return i_e <= i_s + 1; }
    double total_mass() const;
};

/// Positions paired with recovered density values over [i_s, i_e]. The first
/// and last entries are the boundary super-particles carrying all bundled mass.
struct DensityField {
    std::vector<double> positions;
    std::vector<double> density;
    std::vector<double> masses;
    std::size_t i_s = 0, i_e = 0;  // free range in original particle indices

    double total_mass() const;
};

struct Diagnostics {
    double total_mass = 0.0;
    double barycenter = 0.0;  // first moment of the mass distribution
    double energy = 0.0;
    double f_left = 0.0, f_right = 0.0;
    double mass_left = 0.0, mass_right = 0.0;
    double time = 0.0;
};

/// Identity grid, masses m0_i = h f0(X_i) with half weights at the ends.
ParticleState init_state(const ProblemSpec& spec, std::size_t N);

/// Snap positions inside the fixation bands to the boundary, advance the
/// fronts, and freeze the snapped particles forever.
ParticleState apply_fixation(const EdgeFunction& x_new, const ParticleState& state, double eps0);

/// Recover the density from positions and initial masses; boundary entries
/// use the 2/eps0 spike formulas once particles have accumulated there.
DensityField recover_density(const ParticleState& state, double eps0);

Diagnostics compute_diagnostics(const DensityField& field, const ParticleState& state,
                                const ProblemSpec& spec);

struct StepResult {
    ParticleState state;
    DensityField field;
    Diagnostics diag;
    NewtonReport report;
    // Discrete energy over the pre-step free range, before and after the
    // solve. The decay theorem compares these two; diag.energy is evaluated
    // over the post-fixation range and is not comparable across a fixation
    // event (the functional loses terms when the range shrinks).
    double energy_before = 0.0;
    double energy_after_solve = 0.0;
};

/// One time step: Newton solve on the free range, fixation pass, density
/// recovery, diagnostics.
StepResult advance(const ParticleState& state, const ProblemSpec& spec,
                   const SolverParams& solver);

}  // namespace wf
