#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wf/errors.hpp"
#include "wf/kernels.hpp"
#include "wf/run_config.hpp"

namespace {

int do_validate(const std::string& file) {
    try {
        (void)wf::load_config(file);
        std::printf("ok: %s\n", file.c_str());
        return 0;
    } catch (const wf::ConfigError& e) {
        std::fprintf(stderr, "config error in %s (field %s): %s\n", file.c_str(),
                     e.field.c_str(), e.what());
        return 2;
    }
}

int do_run(const std::string& file) {
    wf::RunConfig config;
    try {
        config = wf::load_config(file);
    } catch (const wf::ConfigError& e) {
        std::fprintf(stderr, "config error in %s (field %s): %s\n", file.c_str(),
                     e.field.c_str(), e.what());
        return 2;
    }
    try {
        wf::run(config);
    } catch (const wf::NewtonFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        std::fprintf(stderr,
                     "newton report: iterations=%d decrement=%.3e residual=%.3e converged=%d\n",
                     e.report.iterations, e.report.final_decrement, e.report.final_residual,
                     static_cast<int>(e.report.converged));
        for (const auto& [lambda, omega] : e.report.damping_history)
            std::fprintf(stderr, "  lambda=%.6e omega=%.6e\n", lambda, omega);
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    }
    return 0;
}

int do_report(const std::vector<std::string>& files) {
    std::vector<std::filesystem::path> paths(files.begin(), files.end());
    const auto rows = wf::report_rows(paths);
    for (const auto& r : rows)
        if (!r.ok) std::fprintf(stderr, "warning: skipping %s: %s\n", r.source.c_str(),
                                r.note.c_str());
    std::fputs(wf::format_report(rows).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian particle solver for the random genetic drift equation"};
    app.require_subcommand(1);

    bool serial = false;
    app.add_flag("--serial", serial, "disable the OpenMP kernel path");

    std::string run_file, validate_file;
    std::vector<std::string> report_files;

    auto* run_cmd = app.add_subcommand("run", "execute a run from a config file");
    run_cmd->add_option("config", run_file, "config file")->required();

    auto* report_cmd = app.add_subcommand("report", "tabulate completed runs");
    report_cmd->add_option("configs", report_files, "config files")->expected(-1);

    auto* validate_cmd = app.add_subcommand("validate", "check a config file");
    validate_cmd->add_option("config", validate_file, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    wf::kernels::set_mode(serial ? wf::kernels::Mode::Serial : wf::kernels::Mode::Parallel);

    if (run_cmd->parsed()) return do_run(run_file);
    if (report_cmd->parsed()) return do_report(report_files);
    return do_validate(validate_file);
}
