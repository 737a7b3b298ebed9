#include "wf/delta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wf/errors.hpp"

namespace wf {

namespace {

void validate_delta(const DeltaSpec& d) {
    if (!(d.x0 > 0.0 && d.x0 < 1.0)) throw ContractError("DeltaSpec: x0 must lie in (0, 1)");
    if (!(d.sigma > 0.0)) throw ContractError("DeltaSpec: sigma must be positive");
    if (!(d.offset > 0.0)) throw ContractError("DeltaSpec: offset must be positive");
}

/// Trapezoid mass of node samples on the uniform grid.
double node_mass(const std::vector<double>& v, double h) {
    double m = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) m += v[i];
    return m * h;
}

/// Control-volume breakpoints of a monotone particle set over its free range:
/// 0, the midpoints between consecutive free particles, 1.
std::vector<double> breakpoints(const ParticleState& st) {
    const std::size_t n = st.i_e - st.i_s + 1;
    std::vector<double> b(n + 1);
    b[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k)
        b[k] = 0.5 * (st.x[st.i_s + k - 1] + st.x[st.i_s + k]);
    b[n] = 1.0;
    return b;
}

}  // namespace

InterpolationResult mass_interpolate(const ParticleState& source, const ParticleState& target,
                                     double eps0) {
    const std::size_t N = target.grid_size();
    const auto sb = breakpoints(source);
    const auto tb = breakpoints(target);
    const std::size_t ns = sb.size() - 1;  // source cells
    const std::size_t nt = tb.size() - 1;  // target cells

    std::vector<double> sval(ns);
    for (std::size_t k = 0; k < ns; ++k)
        sval[k] = source.m0[source.i_s + k] / (sb[k + 1] - sb[k]);

    InterpolationResult out;
    out.i_s = target.i_s;
    out.i_e = target.i_e;
    out.target_masses.assign(N + 1, 0.0);

    // Exact integration of the piecewise-constant density over target cells
    // by a merge sweep of the two sorted breakpoint lists.
    std::size_t k = 0;
    for (std::size_t j = 0; j < nt; ++j) {
        const double lo = tb[j], hi = tb[j + 1];
        double m = 0.0;
        while (k < ns && sb[k + 1] <= lo) ++k;
        for (std::size_t kk = k; kk < ns && sb[kk] < hi; ++kk) {
            const double a = std::max(lo, sb[kk]);
            const double b = std::min(hi, sb[kk + 1]);
            if (b > a) m += sval[kk] * (b - a);
        }
        out.target_masses[target.i_s + j] = m;
    }

    // Boundary-accumulated mass is shared equally among the target particles
    // bundled at that boundary; with none bundled it joins the front particle.
    double src_left = 0.0;
    for (std::size_t i = 0; i < source.i_s; ++i) src_left += source.m0[i];
    double src_right = 0.0;
    for (std::size_t i = source.i_e + 1; i <= source.grid_size(); ++i) src_right += source.m0[i];
    if (target.i_s > 0) {
        const double share = src_left / static_cast<double>(target.i_s);
        for (std::size_t j = 0; j < target.i_s; ++j) out.target_masses[j] = share;
    } else {
        out.target_masses[0] += src_left;
    }
    if (target.i_e < N) {
        const double share = src_right / static_cast<double>(N - target.i_e);
        for (std::size_t j = target.i_e + 1; j <= N; ++j) out.target_masses[j] = share;
    } else {
        out.target_masses[N] += src_right;
    }

    // Recover the density on the target particles by the same boundary-spike
    // rules as the time stepper.
    ParticleState carrier;
    carrier.x = target.x;
    carrier.m0 = out.target_masses;
    carrier.i_s = target.i_s;
    carrier.i_e = target.i_e;
    out.target_density = recover_density(carrier, eps0).density;
    return out;
}

ProblemSpec make_background_problem(const DeltaSpec& spec, const ProblemSpec& base) {
    validate_delta(spec);
    ProblemSpec p = base;
    std::fill(p.f0.values.begin(), p.f0.values.end(), spec.offset);
    return p;
}

ProblemSpec make_lifted_problem(const DeltaSpec& spec, const ProblemSpec& base) {
    validate_delta(spec);
    ProblemSpec p = base;
    const std::size_t N = p.f0.intervals();
    const double h = p.f0.h;
    std::vector<double> gauss(N + 1);
    const double inv = 1.0 / (spec.sigma * std::sqrt(2.0 * M_PI));
    for (std::size_t i = 0; i <= N; ++i) {
        const double z = (static_cast<double>(i) * h - spec.x0) / spec.sigma;
        gauss[i] = inv * std::exp(-0.5 * z * z);
    }
    // Renormalize on [0,1] so the signed mass of w - g is exactly 1.
    const double m = node_mass(gauss, h);
    for (std::size_t i = 0; i <= N; ++i) p.f0.values[i] = spec.offset + gauss[i] / m;
    return p;
}

namespace {

Diagnostics frozen_diag(const ParticleState& st, const ProblemSpec& spec, double eps0) {
    const DensityField f = recover_density(st, eps0);
    return compute_diagnostics(f, st, spec);
}

DeltaSnapshot combine(const ParticleState& w_state, const ProblemSpec& w_spec,
                      const ParticleState& g_state, const ProblemSpec& g_spec, double eps0) {
    const InterpolationResult gi = mass_interpolate(g_state, w_state, eps0);
    const DensityField W = recover_density(w_state, eps0);
    const DensityField G = recover_density(g_state, eps0);

    DeltaSnapshot snap;
    snap.time = w_state.t;
    DensityField& f = snap.field;
    f.i_s = w_state.i_s;
    f.i_e = w_state.i_e;
    f.positions = W.positions;
    const std::size_t n = W.positions.size();
    f.density.resize(n);
    f.masses.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        f.density[k] = W.density[k] - gi.target_density[k];
    for (std::size_t k = 1; k + 1 < n; ++k)
        f.masses[k] = w_state.m0[f.i_s + k] - gi.target_masses[f.i_s + k];
    double g_left = 0.0, g_right = 0.0;
    for (std::size_t j = 0; j <= f.i_s; ++j) g_left += gi.target_masses[j];
    for (std::size_t j = f.i_e; j <= w_state.grid_size(); ++j) g_right += gi.target_masses[j];
    // Both sub-runs bundle their fixated mass as a point mass at the shared
    // endpoint, so the combined boundary mass is the plain difference of the
    // two super-particles; interpolation plays no role at a single point. The
    // interpolation instead smears the part of the g super-particle that falls
    // inside the first/last target control volume; reassign that residual to
    // the adjacent interior particle so the signed total stays exact.
    if (n > 2) {
        f.masses.front() = W.masses.front() - G.masses.front();
        f.masses.back() = W.masses.back() - G.masses.back();
        f.masses[1] += G.masses.front() - g_left;
        f.masses[n - 2] += G.masses.back() - g_right;
    } else {
        f.masses.front() = W.masses.front() - g_left;
        f.masses.back() = W.masses.back() - g_right;
    }

    snap.energy_w = discrete_energy(w_state.x, w_spec, w_state.i_s, w_state.i_e);
    snap.energy_g = discrete_energy(g_state.x, g_spec, g_state.i_s, g_state.i_e);

    Diagnostics& d = snap.diag;
    d.time = w_state.t;
    d.total_mass = f.total_mass();
    double first_moment = 0.0;
    for (std::size_t k = 0; k < n; ++k) first_moment += f.masses[k] * f.positions[k];
    d.barycenter = first_moment / d.total_mass;
    d.energy = snap.energy_w - snap.energy_g;
    d.f_left = f.density.front();
    d.f_right = f.density.back();
    d.mass_left = f.masses.front();
    d.mass_right = f.masses.back();
    return snap;
}

}  // namespace

SplitTrace run_split(const DeltaSpec& spec, const ProblemSpec& base, const SolverParams& solver,
                     const std::vector<double>& output_times, long diag_stride) {
    validate_delta(spec);
    if (output_times.empty()) throw ContractError("run_split: output_times must not be empty");
    for (std::size_t i = 0; i + 1 < output_times.size(); ++i)
        if (!(output_times[i] < output_times[i + 1]))
            throw ContractError("run_split: output_times must be increasing");
    if (!(output_times.front() >= 0.0))
        throw ContractError("run_split: output_times must be non-negative");

    const ProblemSpec g_spec = make_background_problem(spec, base);
    const ProblemSpec w_spec = make_lifted_problem(spec, base);
    const std::size_t N = base.f0.intervals();

    ParticleState g_state = init_state(g_spec, N);
    ParticleState w_state = init_state(w_spec, N);

    std::vector<long> output_steps;
    output_steps.reserve(output_times.size());
    for (double t : output_times)
        output_steps.push_back(std::lround(t / solver.tau));
    const long n_steps = output_steps.back();

    SplitTrace trace;
    trace.signed_mass0 = w_state.total_mass() - g_state.total_mass();
    auto record_diag = [&]() {
        trace.w_diag.push_back(frozen_diag(w_state, w_spec, solver.eps0));
        trace.g_diag.push_back(frozen_diag(g_state, g_spec, solver.eps0));
        trace.combined.push_back(combine(w_state, w_spec, g_state, g_spec, solver.eps0).diag);
    };

    std::size_t next_out = 0;
    if (output_steps[0] == 0) {
        trace.snapshots.push_back(combine(w_state, w_spec, g_state, g_spec, solver.eps0));
        ++next_out;
    }
    if (diag_stride > 0) record_diag();

    for (long n = 1; n <= n_steps; ++n) {
        // The two sub-problems are stepped in lockstep so output times align
        // without temporal interpolation.
        if (!g_state.fully_fixated()) g_state = advance(g_state, g_spec, solver).state;
        if (!w_state.fully_fixated()) w_state = advance(w_state, w_spec, solver).state;
        // Keep clocks aligned even when one sub-run has frozen early.
        g_state.t = w_state.t = static_cast<double>(n) * solver.tau;

        const bool at_output = next_out < output_steps.size() && n == output_steps[next_out];
        if (at_output) {
            trace.snapshots.push_back(combine(w_state, w_spec, g_state, g_spec, solver.eps0));
            ++next_out;
        }
        if (diag_stride > 0 && (n % diag_stride == 0 || n == n_steps)) record_diag();
    }
    return trace;
}

std::vector<DensityField> solve_delta(const DeltaSpec& spec, const ProblemSpec& base,
                                      const SolverParams& solver,
                                      const std::vector<double>& output_times) {
    SplitTrace trace = run_split(spec, base, solver, output_times);
    std::vector<DensityField> out;
    out.reserve(trace.snapshots.size());
    for (auto& s : trace.snapshots) out.push_back(std::move(s.field));
    return out;
}

std::vector<std::pair<DensityField, Diagnostics>> solve_selection(
    const DeltaSpec& spec, double s, double Ne, const SolverParams& solver,
    const std::vector<double>& output_times, std::size_t N) {
    if (std::abs(s) > 0.01) throw ContractError("solve_selection: |s| must be <= 0.01");
    if (!(Ne > 0.0)) throw ContractError("solve_selection: Ne must be positive");
    ProblemSpec base;
    const double h = 1.0 / static_cast<double>(N);
    base.f0 = EdgeFunction(std::vector<double>(N + 1, 1.0), h);
    base.s = s;
    base.Ne = Ne;
    base.selection_enabled = true;
    SplitTrace trace = run_split(spec, base, solver, output_times);
    std::vector<std::pair<DensityField, Diagnostics>> out;
    out.reserve(trace.snapshots.size());
    for (auto& snap : trace.snapshots)
        out.emplace_back(std::move(snap.field), snap.diag);
    return out;
}

double p_fix(double x0, double s, double Ne) {
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw ContractError("p_fix: x0 must lie in [0, 1]");
    const double z = 4.0 * s * Ne;
    if (std::abs(z) < 1e-8) return x0;  // limit as s*Ne -> 0
    return std::expm1(-x0 * z) / std::expm1(-z);
}

}  // namespace wf
