#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wf/delta.hpp"
#include "wf/newton.hpp"

namespace wf {

enum class ProblemKind { PositiveInitial, PureDriftDelta, SemiSelection };

enum class InitialKind { Uniform, F02PolynomialSine, CustomSamples, Delta };

struct RunConfig {
    ProblemKind problem = ProblemKind::PositiveInitial;
    InitialKind initial = InitialKind::Uniform;
    std::vector<double> custom_samples;  // for InitialKind::CustomSamples
    DeltaSpec delta;                     // for delta problems

    std::size_t N = 1000;
    double tau = 1e-3;
    double eps0 = 1e-10;
    double t_end = 10.0;
    std::vector<double> output_times;    // empty -> use output_stride
    long output_stride = 0;              // 0 -> snapshots only at t_end
    long diag_stride = 1;                // diagnostics rows every this many steps

    double s = 0.0;
    double Ne = 0.0;

    NewtonParams newton;
    std::filesystem::path output_dir;
    std::set<std::string> emit = {"snapshots", "diagnostics"};
};

/// Parse and validate a config file; throws ConfigError naming the field.
RunConfig load_config(const std::filesystem::path& file);

/// Execute a run and emit its data files into config.output_dir.
void run(const RunConfig& config);

struct ReportRow {
    std::string source;
    bool ok = false;
    std::string note;
    double h = 0, tau = 0, total_mass = 0, barycenter = 0, f_l = 0, f_r = 0, m_l = 0, m_r = 0;
};

/// Summarize completed runs (final diagnostics row per config) as a
/// machine-readable table; missing artifacts are listed and skipped.
std::vector<ReportRow> report_rows(const std::vector<std::filesystem::path>& config_files);
std::string format_report(const std::vector<ReportRow>& rows);

}  // namespace wf
