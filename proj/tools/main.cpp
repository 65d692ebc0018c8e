// ringdyn — constraint analysis, commutator tables, and constrained dynamics
// for the breathing-ring + collective-oscillator model.

#include "ringdyn/config.hpp"
#include "ringdyn/errors.hpp"
#include "ringdyn/report.hpp"
#include "ringdyn/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

namespace fs = std::filesystem;
using namespace ringdyn;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitAnalysis = 2;
constexpr int kExitIntegrator = 3;
constexpr int kExitConfig = 4;

struct CliOptions {
    std::string config_path;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<double> dt;
    std::optional<double> t_final;
};

RunConfig effective_config(const CliOptions& opts) {
    RunConfig config = load_config(opts.config_path);
    if (opts.output) config.output_dir = *opts.output;
    if (opts.seed) config.seeds = {*opts.seed};
    if (opts.scheme) config.scheme = scheme_from_name(*opts.scheme);
    if (opts.dt) config.dt = *opts.dt;
    if (opts.t_final) config.t_final = *opts.t_final;
    config.validate();
    return config;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write output file '" + path.string() + "'");
    out << content;
}

ConstraintAnalysis analyze_model(const ModelContext& ctx) {
    return run_dirac_bergmann(ctx.h_total, {ctx.primary_constraint});
}

int cmd_analyze(const RunConfig& config) {
    const ModelContext ctx = build_model_context(config.model);
    const auto analysis = analyze_model(ctx);
    fs::create_directories(config.output_dir);
    write_file(fs::path(config.output_dir) / "analysis.json", analysis_report_json(analysis));
    std::cout << "analysis: " << analysis.constraints.size() << " constraints ("
              << analysis.primary_count << " primary) -> " << config.output_dir
              << "/analysis.json\n";
    return kExitOk;
}

int cmd_table(const RunConfig& config) {
    const ModelContext ctx = build_model_context(config.model);
    const auto analysis = analyze_model(ctx);
    const auto table = commutator_table(analysis, config.model.bath.mode_count > 0);
    fs::create_directories(config.output_dir);
    write_file(fs::path(config.output_dir) / "commutator_table.json", table_json(table));
    write_file(fs::path(config.output_dir) / "commutator_table.txt", table_text(table));
    std::cout << "table: " << table.size() << " entries -> " << config.output_dir
              << "/commutator_table.{json,txt}\n";
    return kExitOk;
}

int cmd_simulate(const RunConfig& config) {
    const ModelContext ctx = build_model_context(config.model);
    const auto analysis = analyze_model(ctx);
    fs::create_directories(config.output_dir);
    std::vector<fs::path> written;
    try {
        for (std::uint64_t seed : config.seeds) {
            const InitialState ic = sample_initial(ctx.spec, ctx.modes, config.x0_vector(),
                                                   config.p0_vector(), config.temperature, seed);
            IntegrateOptions opt;
            opt.scheme = config.scheme;
            opt.dt = config.dt;
            opt.t_final = config.t_final;
            opt.penalty_k = config.penalty_k.front();
            const Trajectory traj = integrate(analysis, ctx, ic, opt);
            const ObservableSeries obs = measure(traj, ctx);

            const std::string tag = scheme_name(config.scheme) + "_seed" + std::to_string(seed);
            const fs::path traj_path = fs::path(config.output_dir) / ("trajectory_" + tag + ".csv");
            const fs::path obs_path = fs::path(config.output_dir) / ("observables_" + tag + ".csv");
            {
                std::ofstream out(traj_path);
                if (!out) throw config_error("cannot write '" + traj_path.string() + "'");
                written.push_back(traj_path);
                write_trajectory_csv(out, traj);
            }
            {
                std::ofstream out(obs_path);
                if (!out) throw config_error("cannot write '" + obs_path.string() + "'");
                written.push_back(obs_path);
                write_observables_csv(out, obs);
            }
            const double h0 = obs.h_total[0];
            const double drift = (obs.h_total.array() - h0).abs().maxCoeff() /
                                 std::max(std::abs(h0), 1e-300);
            std::cout << "simulate " << tag << ": max|phi| = "
                      << format_double(obs.phi.cwiseAbs().maxCoeff())
                      << ", relative energy drift = " << format_double(drift) << '\n';
        }
    } catch (...) {
        for (const auto& path : written) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }
    return kExitOk;
}

int cmd_verify(const RunConfig& config) {
    const auto results = run_verification();
    fs::create_directories(config.output_dir);
    write_file(fs::path(config.output_dir) / "verify_report.json",
               verification_report_json(results));
    bool all_pass = true;
    for (const auto& result : results) {
        std::cout << (result.pass ? "PASS" : "FAIL") << " " << result.id << " " << result.name
                  << ": " << result.detail << '\n';
        all_pass = all_pass && result.pass;
    }
    return all_pass ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"constraint analysis and constrained dynamics workbench"};
    app.require_subcommand(1);

    CliOptions opts;
    std::vector<CLI::App*> subs;
    for (const char* name : {"analyze", "table", "simulate", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", opts.config_path, "path to the JSON run configuration")
            ->required();
        sub->add_option("--output", opts.output, "output directory (overrides config)");
        sub->add_option("--seed", opts.seed, "single seed (overrides config seeds)");
        sub->add_option("--scheme", opts.scheme, "dirac-rk4 | rattle | penalty");
        sub->add_option("--dt", opts.dt, "time step (overrides config)");
        sub->add_option("--t-final", opts.t_final, "final time (overrides config)");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitConfig;
    }

    try {
        const RunConfig config = effective_config(opts);
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "analyze") return cmd_analyze(config);
        if (command == "table") return cmd_table(config);
        if (command == "simulate") return cmd_simulate(config);
        return cmd_verify(config);
    } catch (const config_error& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return kExitConfig;
    } catch (const dynamics_error& err) {
        std::cerr << "integrator error: " << err.what() << '\n';
        return kExitIntegrator;
    } catch (const std::exception& err) {
        std::cerr << "analysis error: " << err.what() << '\n';
        return kExitAnalysis;
    }
}
