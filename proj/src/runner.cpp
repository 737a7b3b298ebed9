#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wf/errors.hpp"
#include "wf/run_config.hpp"

namespace wf {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

EdgeFunction sample_initial(const RunConfig& c) {
    const double h = 1.0 / static_cast<double>(c.N);
    std::vector<double> v(c.N + 1);
    switch (c.initial) {
        case InitialKind::Uniform:
            std::fill(v.begin(), v.end(), 1.0);
            break;
        case InitialKind::F02PolynomialSine:
            for (std::size_t i = 0; i <= c.N; ++i) {
                const double x = static_cast<double>(i) * h;
                v[i] = 0.2 * (2.0 + 6.0 * x + 0.5 * M_PI * std::sin(2.0 * M_PI * x));
            }
            break;
        case InitialKind::CustomSamples:
            v = c.custom_samples;
            break;
        case InitialKind::Delta:
            throw ContractError("sample_initial: delta handled by the split driver");
    }
    return EdgeFunction(std::move(v), h);
}

class DiagWriter {
public:
    DiagWriter(const std::filesystem::path& path, bool enabled) : enabled_(enabled) {
        if (!enabled_) return;
        out_.open(path);
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        out_ << "# time total_mass barycenter energy f_l f_r M_l M_r\n";
    }
    void row(const Diagnostics& d) {
        if (!enabled_) return;
        out_ << fmt(d.time) << ' ' << fmt(d.total_mass) << ' ' << fmt(d.barycenter) << ' '
             << fmt(d.energy) << ' ' << fmt(d.f_left) << ' ' << fmt(d.f_right) << ' '
             << fmt(d.mass_left) << ' ' << fmt(d.mass_right) << '\n';
    }

private:
    bool enabled_;
    std::ofstream out_;
};

void write_snapshot(const std::filesystem::path& dir, long step, const DensityField& f,
                    double conserved_total) {
    // Emitter invariant: the mass column must sum to the conserved total.
    double total = 0.0;
    for (double m : f.masses) total += m;
    if (std::abs(total - conserved_total) > 1e-12 * (1.0 + std::abs(conserved_total)))
        throw std::runtime_error("snapshot mass column does not sum to the conserved total");

    char name[40];
    std::snprintf(name, sizeof name, "snapshot_%08ld.dat", step);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot open snapshot file");
    out << "# index position density mass\n";
    for (std::size_t k = 0; k < f.positions.size(); ++k)
        out << f.i_s + k << ' ' << fmt(f.positions[k]) << ' ' << fmt(f.density[k]) << ' '
            << fmt(f.masses[k]) << '\n';
}

std::vector<long> snapshot_steps(const RunConfig& c, long n_steps) {
    std::vector<long> steps;
    if (!c.output_times.empty()) {
        for (double t : c.output_times) steps.push_back(std::lround(t / c.tau));
    } else if (c.output_stride > 0) {
        for (long n = c.output_stride; n < n_steps; n += c.output_stride) steps.push_back(n);
    }
    if (steps.empty() || steps.back() != n_steps) steps.push_back(n_steps);
    return steps;
}

void run_positive(const RunConfig& c, json& meta) {
    ProblemSpec spec;
    spec.f0 = sample_initial(c);

    SolverParams solver;
    solver.tau = c.tau;
    solver.eps0 = c.eps0;
    solver.newton = c.newton;

    ParticleState state = init_state(spec, c.N);
    const double conserved = state.total_mass();
    const long n_steps = std::lround(c.t_end / c.tau);
    const auto snaps = snapshot_steps(c, n_steps);

    DiagWriter diag(c.output_dir / "diagnostics.dat", c.emit.count("diagnostics") > 0);
    std::ofstream energy_trace, particle_trace;
    if (c.emit.count("energy_trace")) {
        energy_trace.open(c.output_dir / "energy_trace.dat");
        energy_trace << "# time energy\n";
    }
    if (c.emit.count("particle_trace")) {
        particle_trace.open(c.output_dir / "particle_trace.dat");
        particle_trace << "# time x_0 .. x_N\n";
    }
    auto trace_particles = [&](const ParticleState& st) {
        if (!particle_trace.is_open()) return;
        particle_trace << fmt(st.t);
        for (double x : st.x.values) particle_trace << ' ' << fmt(x);
        particle_trace << '\n';
    };

    {
        DensityField f0field = recover_density(state, c.eps0);
        diag.row(compute_diagnostics(f0field, state, spec));
        trace_particles(state);
        if (c.emit.count("snapshots") && !c.output_times.empty() && c.output_times.front() == 0.0)
            write_snapshot(c.output_dir, 0, f0field, conserved);
    }

    long newton_total = 0;
    int newton_max = 0;
    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] == 0) ++next_snap;
    bool early = false;
    long n = 0;
    while (n < n_steps) {
        ++n;
        StepResult r = advance(state, spec, solver);
        state = std::move(r.state);
        newton_total += r.report.iterations;
        newton_max = std::max(newton_max, r.report.iterations);

        const bool last = n == n_steps || state.fully_fixated();
        if (energy_trace.is_open())
            energy_trace << fmt(state.t) << ' ' << fmt(r.diag.energy) << '\n';
        if (n % c.diag_stride == 0 || last) diag.row(r.diag);
        bool snap_now = last && c.emit.count("snapshots") > 0;
        if (next_snap < snaps.size() && n == snaps[next_snap]) {
            snap_now = c.emit.count("snapshots") > 0;
            ++next_snap;
        }
        if (snap_now) {
            write_snapshot(c.output_dir, n, r.field, conserved);
            trace_particles(state);
        }
        if (state.fully_fixated()) {
            early = n < n_steps;
            break;
        }
    }

    meta["steps_taken"] = n;
    meta["terminated_early"] = early;
    meta["newton_iterations_total"] = newton_total;
    meta["newton_iterations_max_per_step"] = newton_max;
    meta["conserved_total_mass"] = conserved;
}

void run_delta(const RunConfig& c, json& meta) {
    ProblemSpec base;
    base.f0 = EdgeFunction(std::vector<double>(c.N + 1, 1.0), 1.0 / static_cast<double>(c.N));
    if (c.problem == ProblemKind::SemiSelection) {
        base.s = c.s;
        base.Ne = c.Ne;
        base.selection_enabled = true;
    }

    SolverParams solver;
    solver.tau = c.tau;
    solver.eps0 = c.eps0;
    solver.newton = c.newton;

    std::vector<double> times = c.output_times;
    if (times.empty()) {
        if (c.output_stride > 0) {
            const long n_steps = std::lround(c.t_end / c.tau);
            for (long n = c.output_stride; n < n_steps; n += c.output_stride)
                times.push_back(static_cast<double>(n) * c.tau);
        }
        times.push_back(c.t_end);
    }

    SplitTrace trace = run_split(c.delta, base, solver, times, c.diag_stride);

    DiagWriter diag(c.output_dir / "diagnostics.dat", c.emit.count("diagnostics") > 0);
    DiagWriter wdiag(c.output_dir / "w_diagnostics.dat", c.emit.count("diagnostics") > 0);
    DiagWriter gdiag(c.output_dir / "g_diagnostics.dat", c.emit.count("diagnostics") > 0);
    for (const auto& d : trace.combined) diag.row(d);
    for (const auto& d : trace.w_diag) wdiag.row(d);
    for (const auto& d : trace.g_diag) gdiag.row(d);

    if (c.emit.count("energy_trace")) {
        std::ofstream et(c.output_dir / "energy_trace.dat");
        et << "# time energy_w energy_g\n";
        for (std::size_t i = 0; i < trace.w_diag.size(); ++i)
            et << fmt(trace.w_diag[i].time) << ' ' << fmt(trace.w_diag[i].energy) << ' '
               << fmt(trace.g_diag[i].energy) << '\n';
    }

    if (c.emit.count("snapshots")) {
        for (const auto& snap : trace.snapshots) {
            const long step = std::lround(snap.time / c.tau);
            // Raw (unclamped) signed densities are preserved in the data files.
            write_snapshot(c.output_dir, step, snap.field, trace.signed_mass0);
        }
    }

    meta["steps_taken"] = std::lround(times.back() / c.tau);
    meta["signed_total_mass"] = trace.snapshots.back().diag.total_mass;
    meta["negative_density_clamp"] =
        "report output clamps negative densities below 1e-6 * max|f| to 0; data files are raw";
}

json config_to_json(const RunConfig& c) {
    json j;
    j["problem"] = c.problem == ProblemKind::PositiveInitial  ? "positive_initial"
                   : c.problem == ProblemKind::PureDriftDelta ? "pure_drift_delta"
                                                              : "semi_selection";
    j["N"] = c.N;
    j["h"] = 1.0 / static_cast<double>(c.N);
    j["tau"] = c.tau;
    j["eps0"] = c.eps0;
    j["t_end"] = c.t_end;
    j["diag_stride"] = c.diag_stride;
    j["newton"] = {{"lambda_prime", c.newton.lambda_prime},
                   {"decrement_tol", c.newton.decrement_tol},
                   {"residual_tol", c.newton.residual_tol},
                   {"max_iters", c.newton.max_iters}};
    if (c.initial == InitialKind::Delta)
        j["delta"] = {{"x0", c.delta.x0}, {"sigma", c.delta.sigma}, {"offset", c.delta.offset}};
    if (c.problem == ProblemKind::SemiSelection) j["selection"] = {{"s", c.s}, {"Ne", c.Ne}};
    return j;
}

}  // namespace

void run(const RunConfig& c) {
    std::filesystem::create_directories(c.output_dir);
    json meta;
    meta["config"] = config_to_json(c);

    const auto start = std::chrono::steady_clock::now();
    if (c.problem == ProblemKind::PositiveInitial)
        run_positive(c, meta);
    else
        run_delta(c, meta);
    const auto stop = std::chrono::steady_clock::now();
    meta["wall_time_s"] = std::chrono::duration<double>(stop - start).count();

    std::ofstream out(c.output_dir / "metadata.json");
    out << meta.dump(2) << '\n';
}

std::vector<ReportRow> report_rows(const std::vector<std::filesystem::path>& config_files) {
    std::vector<ReportRow> rows;
    for (const auto& file : config_files) {
        ReportRow row;
        row.source = file.string();
        try {
            const RunConfig c = load_config(file);
            row.h = 1.0 / static_cast<double>(c.N);
            row.tau = c.tau;
            std::ifstream in(c.output_dir / "diagnostics.dat");
            if (!in) {
                row.note = "missing diagnostics in " + c.output_dir.string();
                rows.push_back(row);
                continue;
            }
            std::string line, last;
            while (std::getline(in, line))
                if (!line.empty() && line[0] != '#') last = line;
            if (last.empty()) {
                row.note = "empty diagnostics in " + c.output_dir.string();
                rows.push_back(row);
                continue;
            }
            std::istringstream ls(last);
            double time;
            ls >> time >> row.total_mass >> row.barycenter;
            double energy;
            ls >> energy >> row.f_l >> row.f_r >> row.m_l >> row.m_r;
            // Floating-point dust from the w-g subtraction is clamped in
            // report output only.
            const double scale = 1e-6 * std::max(std::abs(row.f_l), std::abs(row.f_r));
            if (row.f_l < 0.0 && -row.f_l <= scale) row.f_l = 0.0;
            if (row.f_r < 0.0 && -row.f_r <= scale) row.f_r = 0.0;
            row.ok = true;
        } catch (const ConfigError& e) {
            row.note = std::string("config error (") + e.field + "): " + e.what();
        } catch (const std::exception& e) {
            row.note = std::string("unreadable config: ") + e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "h\ttau\tM_total\tBarycenter\tf_l\tf_r\tM_l\tM_r\tsource\n";
    for (const auto& r : rows) {
        if (!r.ok) continue;
        out << fmt(r.h) << '\t' << fmt(r.tau) << '\t' << fmt(r.total_mass) << '\t'
            << fmt(r.barycenter) << '\t' << fmt(r.f_l) << '\t' << fmt(r.f_r) << '\t'
            << fmt(r.m_l) << '\t' << fmt(r.m_r) << '\t' << r.source << '\n';
    }
    return out.str();
}

}  // namespace wf
