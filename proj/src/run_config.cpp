#include "wf/run_config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "wf/errors.hpp"

namespace wf {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key, double dflt,
                      bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(key, key + " is required");
        return dflt;
    }
    if (!j[key].is_number()) throw ConfigError(key, key + " must be a number");
    return j[key].get<double>();
}

ProblemKind parse_problem(const std::string& s) {
    if (s == "positive_initial") return ProblemKind::PositiveInitial;
    if (s == "pure_drift_delta") return ProblemKind::PureDriftDelta;
    if (s == "semi_selection") return ProblemKind::SemiSelection;
    throw ConfigError("problem", "unknown problem kind: " + s);
}

}  // namespace

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("file", "cannot open config file: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("file", std::string("config parse error: ") + e.what());
    }

    RunConfig c;
    if (!j.contains("problem") || !j["problem"].is_string())
        throw ConfigError("problem", "problem must be one of positive_initial, "
                                     "pure_drift_delta, semi_selection");
    c.problem = parse_problem(j["problem"].get<std::string>());

    const double N = require_number(j, "N", 1000, true);
    if (N < 2 || N != std::floor(N)) throw ConfigError("N", "N must be an integer >= 2");
    c.N = static_cast<std::size_t>(N);

    c.tau = require_number(j, "tau", 0, true);
    if (!(c.tau > 0.0)) throw ConfigError("tau", "tau must be > 0");
    c.t_end = require_number(j, "t_end", 0, true);
    if (!(c.t_end > 0.0)) throw ConfigError("t_end", "t_end must be > 0");
    c.eps0 = require_number(j, "eps0", 1e-10);
    if (!(c.eps0 > 0.0 && c.eps0 <= 1e-6))
        throw ConfigError("eps0", "eps0 must lie in (0, 1e-6]");

    if (j.contains("initial")) {
        const json& ini = j["initial"];
        if (!ini.is_object() || !ini.contains("type") || !ini["type"].is_string())
            throw ConfigError("initial", "initial must be an object with a type");
        const std::string type = ini["type"].get<std::string>();
        if (type == "uniform") {
            c.initial = InitialKind::Uniform;
        } else if (type == "f02_polynomial_sine") {
            c.initial = InitialKind::F02PolynomialSine;
        } else if (type == "custom_samples") {
            c.initial = InitialKind::CustomSamples;
            if (!ini.contains("values") || !ini["values"].is_array())
                throw ConfigError("initial.values", "custom_samples requires a values array");
            c.custom_samples = ini["values"].get<std::vector<double>>();
            if (c.custom_samples.size() != c.N + 1)
                throw ConfigError("initial.values", "custom_samples needs N+1 values");
        } else if (type == "delta") {
            c.initial = InitialKind::Delta;
            c.delta.x0 = require_number(ini, "x0", 0, true);
            if (!(c.delta.x0 > 0.0 && c.delta.x0 < 1.0))
                throw ConfigError("initial.x0", "x0 must lie in (0, 1)");
            c.delta.sigma = require_number(ini, "sigma", 0.01);
            if (!(c.delta.sigma > 0.0)) throw ConfigError("initial.sigma", "sigma must be > 0");
            c.delta.offset = require_number(ini, "offset", 10.0);
            if (!(c.delta.offset > 0.0))
                throw ConfigError("initial.offset", "offset must be > 0");
        } else {
            throw ConfigError("initial.type", "unknown initial type: " + type);
        }
    }
    if (c.problem != ProblemKind::PositiveInitial && c.initial != InitialKind::Delta)
        throw ConfigError("initial", "delta problems require initial type 'delta'");
    if (c.problem == ProblemKind::PositiveInitial && c.initial == InitialKind::Delta)
        throw ConfigError("initial", "positive_initial requires a positive initial type");

    if (c.problem == ProblemKind::SemiSelection) {
        if (!j.contains("selection") || !j["selection"].is_object())
            throw ConfigError("selection", "semi_selection requires a selection object");
        c.s = require_number(j["selection"], "s", 0, true);
        c.Ne = require_number(j["selection"], "Ne", 0, true);
        if (std::abs(c.s) > 0.01) throw ConfigError("selection.s", "|s| must be <= 0.01");
        if (!(c.Ne > 0.0)) throw ConfigError("selection.Ne", "Ne must be > 0");
    }

    if (j.contains("output_times")) {
        if (!j["output_times"].is_array())
            throw ConfigError("output_times", "output_times must be an array");
        c.output_times = j["output_times"].get<std::vector<double>>();
        for (std::size_t i = 0; i + 1 < c.output_times.size(); ++i)
            if (!(c.output_times[i] < c.output_times[i + 1]))
                throw ConfigError("output_times", "output_times must be strictly increasing");
        if (!c.output_times.empty() && c.output_times.back() > c.t_end + 1e-12)
            throw ConfigError("output_times", "output_times must not exceed t_end");
    }
    const double stride = require_number(j, "output_stride", 0);
    if (stride < 0 || stride != std::floor(stride))
        throw ConfigError("output_stride", "output_stride must be a non-negative integer");
    c.output_stride = static_cast<long>(stride);
    const double dstride = require_number(j, "diag_stride", 1);
    if (dstride < 1 || dstride != std::floor(dstride))
        throw ConfigError("diag_stride", "diag_stride must be a positive integer");
    c.diag_stride = static_cast<long>(dstride);

    if (j.contains("newton")) {
        const json& nw = j["newton"];
        c.newton.lambda_prime = require_number(nw, "lambda_prime", c.newton.lambda_prime);
        c.newton.decrement_tol = require_number(nw, "decrement_tol", c.newton.decrement_tol);
        c.newton.residual_tol = require_number(nw, "residual_tol", c.newton.residual_tol);
        const double mi = require_number(nw, "max_iters", c.newton.max_iters);
        if (mi < 1 || mi != std::floor(mi))
            throw ConfigError("newton.max_iters", "max_iters must be a positive integer");
        c.newton.max_iters = static_cast<int>(mi);
        if (c.newton.lambda_prime < lambda_star() - 1e-15 || c.newton.lambda_prime >= 1.0)
            throw ConfigError("newton.lambda_prime", "lambda_prime must lie in [2-sqrt(3), 1)");
        if (!(c.newton.decrement_tol > 0.0))
            throw ConfigError("newton.decrement_tol", "decrement_tol must be > 0");
        if (!(c.newton.residual_tol > 0.0))
            throw ConfigError("newton.residual_tol", "residual_tol must be > 0");
    }

    if (!j.contains("output_dir") || !j["output_dir"].is_string())
        throw ConfigError("output_dir", "output_dir is required");
    c.output_dir = j["output_dir"].get<std::string>();

    if (j.contains("emit")) {
        if (!j["emit"].is_array()) throw ConfigError("emit", "emit must be an array");
        c.emit.clear();
        for (const auto& e : j["emit"]) {
            if (!e.is_string()) throw ConfigError("emit", "emit entries must be strings");
            const std::string name = e.get<std::string>();
            if (name != "snapshots" && name != "diagnostics" && name != "energy_trace" &&
                name != "particle_trace")
                throw ConfigError("emit", "unknown emit target: " + name);
            c.emit.insert(name);
        }
    }
    return c;
}

}  // namespace wf
