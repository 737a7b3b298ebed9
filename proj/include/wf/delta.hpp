#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wf/stepper.hpp"

namespace wf {

/// Dirac-delta initial data, approximated by a narrow Gaussian riding on a
/// positive lift: f = w - g with g = offset and w = offset + N(x0, sigma^2).
struct DeltaSpec {
    double x0 = 0.5;      // initial allele frequency, in (0, 1)
    double sigma = 0.01;  // Gaussian width
    double offset = 10.0; // positive lift
};

struct InterpolationResult {
    std::vector<double> target_masses;   // per target particle, length N+1
    std::vector<double> target_density;  // over the target free range
    std::size_t i_s = 0, i_e = 0;        // target free range
};

/// Re-assign mass from the source particle set to the target particle set by
/// exact integration of the piecewise-constant mean mass density over the
/// target control volumes; boundary-accumulated mass is shared equally among
/// the target particles bundled at that boundary.
InterpolationResult mass_interpolate(const ParticleState& source, const ParticleState& target,
                                     double eps0);

/// The two positive sub-problems of the delta split, sampled on the N-grid.
/// The Gaussian is renormalized on [0,1] so the signed mass of w - g is 1.
ProblemSpec make_background_problem(const DeltaSpec& spec, const ProblemSpec& base);
ProblemSpec make_lifted_problem(const DeltaSpec& spec, const ProblemSpec& base);

/// Combined snapshot of f = w - g on the w-grid at one output time.
struct DeltaSnapshot {
    double time = 0.0;
    DensityField field;            // signed density/masses of f
    Diagnostics diag;              // total probability, expectation, boundary values
    double energy_w = 0.0, energy_g = 0.0;
};

struct SplitTrace {
    std::vector<DeltaSnapshot> snapshots;       // at the requested output times
    std::vector<Diagnostics> combined;          // per diagnostics stride
    std::vector<Diagnostics> w_diag, g_diag;    // sub-run diagnostics
    double signed_mass0 = 0.0;                  // conserved total of w - g
};

/// Run the w- and g-problems in lockstep and combine at the output times.
/// `base` carries the grid (via f0 size) and the selection parameters.
SplitTrace run_split(const DeltaSpec& spec, const ProblemSpec& base, const SolverParams& solver,
                     const std::vector<double>& output_times, long diag_stride = 0);

/// Pure-drift delta solve; densities of f = w - g at the output times.
std::vector<DensityField> solve_delta(const DeltaSpec& spec, const ProblemSpec& base,
                                      const SolverParams& solver,
                                      const std::vector<double>& output_times);

/// Semi-selection delta solve with M(x) = s x(1-x).
std::vector<std::pair<DensityField, Diagnostics>> solve_selection(
    const DeltaSpec& spec, double s, double Ne, const SolverParams& solver,
    const std::vector<double>& output_times, std::size_t N);

/// Closed-form probability of ultimate fixation.
double p_fix(double x0, double s, double Ne);

}  // namespace wf
