#include "circumnav/cli.hpp"

#include <CLI11.hpp>

#include <string>

namespace {

void add_common_flags(CLI::App* cmd, circumnav::CliOptions& options, std::string& integrator) {
    cmd->add_option("--dt", [&options](const std::vector<std::string>& v) {
        options.dt = std::stod(v[0]);
        return true;
    }, "Override the integration step (seconds)");
    cmd->add_option("--t-end", [&options](const std::vector<std::string>& v) {
        options.t_end = std::stod(v[0]);
        return true;
    }, "Override the horizon (seconds)");
    cmd->add_option("--log-stride", [&options](const std::vector<std::string>& v) {
        options.log_stride = std::stoi(v[0]);
        return true;
    }, "Log every k-th step");
    cmd->add_option("--integrator", integrator, "euler or rk4");
    cmd->add_flag("--plots", options.plots, "Write SVG panels");
    cmd->add_flag("--allow-unsafe-alpha", options.allow_unsafe_alpha,
                  "Skip the kappa_alpha > 0 gate");
    cmd->add_flag("--baseline", options.baseline,
                  "Use the ground-truth-separation baseline controller");
}

bool finish_options(circumnav::CliOptions& options, const std::string& integrator) {
    if (integrator.empty()) return true;
    if (integrator == "euler") {
        options.integrator = circumnav::Integrator::Euler;
        return true;
    }
    if (integrator == "rk4") {
        options.integrator = circumnav::Integrator::Rk4;
        return true;
    }
    return false;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bearing-only target localization and circumnavigation simulator"};
    app.require_subcommand(1);

    std::string scenario_path, sweep_path, out_dir = "out";
    circumnav::CliOptions run_options, verify_options, sweep_options;
    std::string run_integrator, verify_integrator, sweep_integrator;

    CLI::App* run_cmd = app.add_subcommand("run", "Simulate a scenario and write artifacts");
    run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    run_cmd->add_option("-o,--out", out_dir, "Output directory");
    add_common_flags(run_cmd, run_options, run_integrator);

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Simulate, then evaluate the invariant battery");
    verify_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    verify_cmd->add_option("-o,--out", out_dir, "Output directory");
    add_common_flags(verify_cmd, verify_options, verify_integrator);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a grid of scenarios");
    sweep_cmd->add_option("sweep", sweep_path, "Sweep file")->required();
    sweep_cmd->add_option("-o,--out", out_dir, "Output directory");
    add_common_flags(sweep_cmd, sweep_options, sweep_integrator);

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        if (!finish_options(run_options, run_integrator)) {
            std::fprintf(stderr, "error: integrator must be euler or rk4\n");
            return 1;
        }
        return circumnav::cmd_run(scenario_path, out_dir, run_options);
    }
    if (verify_cmd->parsed()) {
        if (!finish_options(verify_options, verify_integrator)) {
            std::fprintf(stderr, "error: integrator must be euler or rk4\n");
            return 1;
        }
        return circumnav::cmd_verify(scenario_path, out_dir, verify_options);
    }
    if (sweep_cmd->parsed()) {
        if (!finish_options(sweep_options, sweep_integrator)) {
            std::fprintf(stderr, "error: integrator must be euler or rk4\n");
            return 1;
        }
        return circumnav::cmd_sweep(sweep_path, out_dir, sweep_options);
    }
    return 1;
}
