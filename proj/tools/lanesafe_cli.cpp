#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "lanesafe/builtin_scenarios.hpp"
#include "lanesafe/gradient_check.hpp"
#include "lanesafe/scenario_io.hpp"
#include "lanesafe/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace lanesafe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

int cmd_run(const std::string& config_path, const std::string& out_dir, double tol) {
    ScenarioConfig scenario;
    try {
        scenario = load_scenario(config_path);
        validate_scenario(scenario);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    }

    TrajectoryLog log;
    RunStats stats;
    try {
        log = run(scenario, &stats);
    } catch (const SimulationError& e) {
        std::cerr << "simulation aborted: " << e.what() << "\n";
        return kExitCheckFailed;
    }

    const InvarianceReport invariance = check_invariance(log, tol);
    const RunReport report = make_run_report(scenario, log, stats, invariance);

    const fs::path out(out_dir);
    fs::create_directories(out);
    write_trajectory_jsonl(log, out / (scenario.name + ".jsonl"));
    write_summary_csv(log, out / (scenario.name + ".csv"));
    write_run_report(report, out / (scenario.name + "-report.json"));
    write_trajectory_svg(log, out / (scenario.name + "-trajectory.svg"));
    write_barrier_svg(log, out / (scenario.name + "-barriers.svg"));

    std::printf("scenario          %s\n", scenario.name.c_str());
    std::printf("invariance        %s (min %s = %.6f at t = %.1f s, vehicle %d, tol %g)\n",
                invariance.pass ? "PASS" : "FAIL", barrier_name(invariance.min_barrier).c_str(),
                invariance.min_value, invariance.min_time, invariance.min_vehicle, tol);
    for (std::size_t i = 0; i < report.final_speed_error.size(); ++i) {
        std::printf("vehicle %zu         |v - v_ref| = %.4f m/s, |y - y_ref| = %.4f m\n", i,
                    report.final_speed_error[i], report.final_lateral_error[i]);
    }
    std::printf("controller        mean %.3f ms, max %.3f ms, fallbacks %d, non-optimal %d\n",
                report.mean_control_ms, report.max_control_ms, report.fallback_count,
                report.non_optimal_count);
    std::printf("outputs           %s\n", (out / (scenario.name + ".jsonl")).c_str());

    const bool ok = invariance.pass && report.non_optimal_count == 0;
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_validate_params(const std::string& config_path, bool refit) {
    CoordinationConfig coord;
    if (!config_path.empty()) {
        try {
            coord = load_scenario(config_path).controller.coord;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    if (refit) {
        const LambdaParams refitted = refit_lambda_cubic(coord.lambda);
        std::printf("refit cubic: a1 = %.6f, a2 = %.6f, a3 = %.6f\n", refitted.a1, refitted.a2,
                    refitted.a3);
        coord.lambda = refitted;
    }
    const ValidationReport report = validate(coord);
    for (const ValidationCheck& c : report.checks) {
        std::printf("%-44s %s", c.name.c_str(),
                    c.pass ? (c.warn ? "PASS (warning)" : "PASS") : "FAIL");
        if (!c.message.empty()) {
            std::printf("  [%s]", c.message.c_str());
        }
        if (!c.pass) {
            std::printf("  worst at %.6f (value %.6f)", c.worst_point, c.worst_value);
        }
        std::printf("\n");
    }
    return report.all_pass() ? kExitOk : kExitCheckFailed;
}

int cmd_check_gradients(std::uint64_t seed, int samples, bool inject_error) {
    if (samples <= 0) {
        std::cerr << "check-gradients: --samples must be positive\n";
        return kExitUsage;
    }
    GradientCheckOptions options;
    options.inject_error = inject_error;
    const GradientCheckResult result =
        check_certificate_gradients(samples, seed, CoordinationConfig{}, ClassKConfig{}, options);
    std::printf("gradient check    %s (worst relative error %.3e over %d frames)\n",
                result.pass ? "PASS" : "FAIL", result.worst_error, result.samples);
    if (!result.worst_detail.empty()) {
        std::printf("worst offender    %s\n", result.worst_detail.c_str());
    }
    return result.pass ? kExitOk : kExitCheckFailed;
}

int cmd_plot(const std::string& log_path, const std::string& out_dir) {
    TrajectoryLog log;
    try {
        log = read_trajectory_jsonl(log_path);
    } catch (const ConfigError& e) {
        std::cerr << "log error: " << e.what() << "\n";
        return kExitUsage;
    }
    const fs::path out(out_dir);
    fs::create_directories(out);
    const std::string stem = log.scenario_name.empty() ? "trajectory" : log.scenario_name;
    write_trajectory_svg(log, out / (stem + "-trajectory.svg"));
    write_barrier_svg(log, out / (stem + "-barriers.svg"));
    std::printf("wrote %s and %s\n", (out / (stem + "-trajectory.svg")).c_str(),
                (out / (stem + "-barriers.svg")).c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized multi-vehicle lane-switching simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string log_path;
    std::string out_dir = "out";
    double tol = 1e-3;
    std::uint64_t seed = 20240917;
    int samples = 1000;
    bool refit = false;
    bool inject_error = false;

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario and write logs and plots");
    run_cmd->add_option("config", config_path, "scenario JSON file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--tol", tol, "invariance tolerance on barrier values");

    CLI::App* validate_cmd =
        app.add_subcommand("validate-params", "grid-check the coordination function axioms");
    validate_cmd->add_option("config", config_path, "scenario JSON file (defaults built in)");
    validate_cmd->add_flag("--refit", refit, "refit the cubic branch for continuity first");

    CLI::App* grad_cmd =
        app.add_subcommand("check-gradients", "compare analytic rows with finite differences");
    grad_cmd->add_option("--seed", seed, "random seed");
    grad_cmd->add_option("--samples", samples, "number of random frames");
    grad_cmd->add_flag("--inject-gradient-error", inject_error,
                       "corrupt one gradient to exercise the failure path (testing)")
        ->group("");

    CLI::App* plot_cmd = app.add_subcommand("plot", "re-render plots from a trajectory log");
    plot_cmd->add_option("log", log_path, "trajectory .jsonl file")->required();
    plot_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(config_path, out_dir, tol);
        if (validate_cmd->parsed()) return cmd_validate_params(config_path, refit);
        if (grad_cmd->parsed()) return cmd_check_gradients(seed, samples, inject_error);
        if (plot_cmd->parsed()) return cmd_plot(log_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
